#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

#include "spdc/grid.hpp"

namespace spdc {

/// Sentinel for an infinite radius of curvature / coherence length.
inline constexpr double kInfinite = std::numeric_limits<double>::infinity();

/// Fully coherent Gaussian pump. w is the standard deviation of the pump
/// *intensity* profile (the convention under which the angular variance
/// formula below is term-by-term exact); R is the wavefront curvature radius.
struct CoherentGaussian {
  double w = 0.0;
  double R = kInfinite;
};

/// Gaussian Schell-model pump with transverse coherence length l_c.
struct GaussianSchell {
  double w = 0.0;
  double R = kInfinite;
  double l_c = kInfinite;
};

/// Pseudo-thermal pump: coherent Gaussian multiplied by random phase screens
/// phi(x) = phi_0 * g(x), g a unit-variance stationary Gaussian process with
/// correlation exp(-(x1-x2)^2 / (2 delta_phi^2)). Operational coherence
/// length l_c = delta_phi / phi_0.
struct PhaseScreenEnsemble {
  double w = 0.0;
  double R = kInfinite;
  double delta_phi = 0.0;
  double phi_0 = 0.0;
  std::size_t n_realizations = 1;
  std::uint64_t seed = 0;
};

struct PumpSpec {
  std::variant<CoherentGaussian, GaussianSchell, PhaseScreenEnsemble> model;
  double k_p = 0.0;  // pump wavenumber in the medium [rad/m]

  void validate() const;  // throws std::invalid_argument
  double waist() const;
  double curvature() const;
};

/// Hermitian two-point correlation W(x1, x2) of the pump on a grid.
/// Row-major n x n storage, index = j1 * n + j2.
class CrossSpectralDensity {
public:
  CrossSpectralDensity(Grid1D grid, std::vector<std::complex<double>> w);

  const Grid1D& grid() const { return grid_; }
  const std::vector<std::complex<double>>& values() const { return w_; }
  std::complex<double> at(std::size_t j1, std::size_t j2) const {
    return w_[j1 * grid_.size() + j2];
  }
  /// Intensity profile W(x, x).
  std::vector<double> diagonal() const;

private:
  Grid1D grid_;
  std::vector<std::complex<double>> w_;
};

/// Angular intensity of a CSD sampled on a grid of spacing dq/2 with 2n
/// origin-centered points; the half spacing arises from the anti-diagonal
/// (x1 - x2) lag grid. coord(l) = (l - n) * dq.
struct AngularSpectrum {
  double dq = 0.0;                // sample spacing [rad/m]
  std::vector<double> values;     // size 2n, nonnegative

  double coord(std::size_t l) const {
    return (static_cast<double>(l) - static_cast<double>(values.size() / 2)) * dq;
  }
  std::vector<double> coords() const;
  double variance() const;  // second central moment over the full support
};

/// l_c = delta_phi / phi_0; phi_0 = 0 gives the coherent (infinite) limit.
double coherence_length_of(double delta_phi, double phi_0);

/// Angular variance of the GSM pump,
///   Dp+^2 = 1/(8 w^2) + w^2 k_p^2 / (2 R^2) + 1/(2 l_c^2),
/// reported in units of hbar^2 m^-2 (the numeric value is the bracket).
/// Infinite R or l_c zero out their terms.
double gsm_delta_p_plus_sq(double w, double R, double l_c, double k_p);

/// W(x1,x2) = exp(-(x1^2+x2^2)/(4w^2)) exp(-(x1-x2)^2/(2 l_c^2))
///            exp(-i k_p (x1^2-x2^2)/(2R)).
/// Requires >= 4 grid points per l_c (and per w).
CrossSpectralDensity analytic_csd(const Grid1D& grid, const GaussianSchell& gs,
                                  double k_p);

/// S(q) = sum over (x1,x2) of W exp(-i q (x1-x2)) dx dx, computed by an FFT
/// over the anti-diagonal lag sums.
AngularSpectrum angular_intensity(const CrossSpectralDensity& csd);

/// Random phase screen phi(x) = phi_0 * g(x) in radians; deterministic per
/// (seed, index). Synthesized by spectral filtering of white Gaussian noise
/// so the correlation of g is exp(-lag^2/(2 delta_phi^2)) up to spectral
/// truncation (< 1e-12 for >= 4 points per delta_phi, which is required).
std::vector<double> make_phase_screen(const Grid1D& grid, double delta_phi,
                                      double phi_0, std::uint64_t seed,
                                      std::uint64_t index);

/// Coherent Gaussian field exp(-x^2/(4w^2)) exp(-i k_p x^2/(2R)); the
/// curvature sign follows the analytic_csd convention, E(x1) E*(x2) matching
/// W term by term.
Field1D coherent_field(const Grid1D& grid, double w, double R, double k_p);

/// Ensemble member n: coherent field times exp(i phi_n(x)).
Field1D ensemble_field(const Grid1D& grid, const PhaseScreenEnsemble& spec,
                       double k_p, std::uint64_t index);

/// Empirical estimator W_est = (1/N) sum_n E_n(x1) E_n*(x2); Hermitian by
/// construction. Requires >= 2 fields on a common grid.
CrossSpectralDensity csd_from_ensemble(const std::vector<Field1D>& fields);

}  // namespace spdc
