#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "spdc/grid.hpp"
#include "spdc/pump.hpp"

namespace spdc {

/// Collinear quasi-phase-matched crystal. The longitudinal mismatch at zero
/// transverse momentum is taken as zero (the poling absorbs the residual), so
/// only the transverse-momentum dependence of the mismatch survives.
struct PhaseMatching {
  double length = 0.0;  // crystal length L [m]
  double k_s = 0.0;     // signal wavenumber in medium [rad/m]
  double k_i = 0.0;     // idler wavenumber in medium [rad/m]
  double k_p = 0.0;     // pump wavenumber in medium [rad/m]

  void validate() const;
};

enum class MismatchModel { Exact, Paraxial };

/// Longitudinal phase mismatch Delta kappa for transverse wavenumbers
/// (q_s, q_i).
///   exact:    sqrt(k_p^2-(q_s+q_i)^2) - sqrt(k_s^2-q_s^2) - sqrt(k_i^2-q_i^2)
///             + (k_s + k_i - k_p)
///   paraxial: (q_s - q_i)^2 / (4 k_s)   (degenerate k_s = k_i, k_p = 2 k_s)
/// Exact mode rejects evanescent input (|q| >= k).
double phase_mismatch(double q_s, double q_i, const PhaseMatching& pm,
                      MismatchModel model);

/// Phase-matching amplitude chi(q_minus) = sinc(Delta kappa L / 2) with the
/// paraxial argument L q_minus^2 / (4 k_s), q_minus = (q_s - q_i)/sqrt(2).
double phase_matching_amplitude(double q_minus, const PhaseMatching& pm);

/// sinc(u) = sin(u)/u with a series branch near zero.
double sinc(double u);

/// Nonnegative joint distribution over (signal, idler) on a common grid.
/// Row-major storage, index = j_s * n + j_i. The integration measure is
/// dx^2 in position space and (dq/2pi)^2 in momentum space, which makes the
/// two domains' total masses equal for transform pairs (Parseval).
class JointDistribution {
public:
  JointDistribution(Grid1D grid, std::vector<double> values, Domain domain);

  const Grid1D& grid() const { return grid_; }
  Domain domain() const { return domain_; }
  const std::vector<double>& values() const { return values_; }
  double at(std::size_t j_s, std::size_t j_i) const {
    return values_[j_s * grid_.size() + j_i];
  }
  /// Coordinate of index j on either axis (x or q depending on domain).
  double coord(std::size_t j) const {
    return domain_ == Domain::Position ? grid_.x(j) : grid_.q(j);
  }
  double cell_measure() const;
  double total_mass() const;

  /// Marginal over the other arm (signal: sum over j_i), in the same
  /// per-coordinate density normalization as the joint values.
  std::vector<double> marginal_signal() const;
  std::vector<double> marginal_idler() const;

  /// Pearson correlation of the rotated coordinates (a_+, a_-) under the
  /// normalized distribution; ~0 when the distribution factorizes.
  double rotated_correlation() const;

  /// Exact second central moment of a_+ or a_- under the distribution
  /// (cell sums, no interpolation).
  double rotated_variance(bool plus) const;

private:
  Grid1D grid_;
  std::vector<double> values_;
  Domain domain_;
};

/// Marginals along the rotated axes a_+/- = (a_s +/- a_i)/sqrt(2), obtained
/// by integrating the bilinearly interpolated distribution along the
/// orthogonal rotated axis. The axis carries the /sqrt(2) normalization.
struct RotatedSections {
  std::vector<double> axis;
  std::vector<double> plus;
  std::vector<double> minus;
};

RotatedSections sections_rotated(const JointDistribution& dist);

/// Joint momentum amplitude Phi(q_s, q_i) = E(q_s + q_i) chi(q_minus) for one
/// pump field realization; E is the pump angular amplitude via fft_physical.
/// Throws NumericError when the angular amplitude has edge intensity above
/// 1e-3 of its peak (grid extent too small).
std::vector<std::complex<double>> joint_momentum_amplitude(
    const Field1D& pump_field, const PhaseMatching& pm);

/// Joint momentum distribution for any pump model: |Phi|^2 for the coherent
/// pump, analytic angular intensity times chi^2 for the Gaussian Schell
/// model, ensemble mean of |Phi_n|^2 for phase screens. phi_0 = 0 ensembles
/// reduce exactly to the coherent path.
JointDistribution joint_momentum_distribution(const PumpSpec& spec,
                                              const PhaseMatching& pm,
                                              const Grid1D& grid);

/// Joint position distribution at the crystal exit face: per realization the
/// 2D inverse transform of Phi, then |Phi|^2, ensemble-averaged for partially
/// coherent pumps. GSM specs run through the phase-screen ensemble path with
/// delta_phi = phi_0 l_c (phi_0 = 3), n_realizations as configured.
JointDistribution joint_position_distribution(const PumpSpec& spec,
                                              const PhaseMatching& pm,
                                              const Grid1D& grid,
                                              std::size_t gsm_realizations = 300);

}  // namespace spdc
