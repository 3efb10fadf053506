#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spdc/biphoton.hpp"

namespace spdc {

/// 4f relay imaging the crystal exit face onto the slit planes with
/// magnification M = f2/f1 (orientation flip absorbed into M).
struct Imaging4f {
  double f1 = 0.0;
  double f2 = 0.0;
  double magnification() const { return f2 / f1; }
};

/// Single lens with the slits in its back focal plane; slit offset d maps to
/// transverse wavenumber q = d k / f3 with k the free-space wavenumber of the
/// detected field (detection happens in air).
struct FourierLens {
  double f3 = 0.0;
  double lambda_s = 0.0;  // detected signal vacuum wavelength [m]
  double lambda_i = 0.0;  // detected idler vacuum wavelength [m]
};

using OpticalSystem = std::variant<Imaging4f, FourierLens>;

void validate(const OpticalSystem& system);

/// Domain a system measures in: Imaging4f -> position, FourierLens -> momentum.
Domain measured_domain(const OpticalSystem& system);

enum class ScanMode { AntiDiagonal, Diagonal, Raster };

std::string to_string(ScanMode mode);
ScanMode scan_mode_from_string(const std::string& s);

struct SlitScanConfig {
  double slit_width = 0.0;                      // physical slit width [m]
  std::vector<std::pair<double, double>> positions;  // (d_s, d_i) offsets [m]
  double dwell_time = 0.0;                      // [s]
  double rate_constant = 0.0;       // coincidence scale [counts/s]
  double singles_rate_constant = 0.0;  // singles scale [counts/s]
  ScanMode mode = ScanMode::AntiDiagonal;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CoincidenceRecord {
  double d_s = 0.0;        // slit offsets [m]
  double d_i = 0.0;
  double coord_s = 0.0;    // mapped physical coordinate (x [m] or q [rad/m])
  double coord_i = 0.0;
  std::uint64_t coincidences = 0;
  std::uint64_t singles_s = 0;
  std::uint64_t singles_i = 0;
  double dwell_time = 0.0;  // [s]
};

/// p = hbar d k / f3 expressed as q = d k / f3 [rad/m].
double map_slit_to_momentum(double d, double lambda_detected, double f3);

/// Object-plane coordinate x = d / M.
double map_slit_to_position(double d, const Imaging4f& system);

/// Mapped coordinate of a slit offset for either arm (arm 0 = signal).
double map_slit(double d, const OpticalSystem& system, int arm);

/// Expected coincidence rate with both slits at (d_s, d_i):
/// rate_constant times the normalized joint distribution integrated over the
/// two slit windows (top-hat transmission, widths mapped into the
/// distribution's coordinates). Throws NumericError if a window leaves the
/// grid.
double expected_rate(const JointDistribution& dist, const OpticalSystem& system,
                     double d_s, double d_i, double slit_width,
                     double rate_constant);

/// Expected singles rate of one arm (marginal density integrated over that
/// arm's slit window, scaled by singles_rate_constant).
double expected_singles_rate(const JointDistribution& dist,
                             const OpticalSystem& system, double d, int arm,
                             double slit_width, double singles_rate_constant);

/// Poisson-sampled scan. Per-record RNG streams are derived from
/// (seed, record index), so the result is independent of evaluation order.
std::vector<CoincidenceRecord> simulate_scan(const JointDistribution& dist,
                                             const OpticalSystem& system,
                                             const SlitScanConfig& config);

/// Slit positions for a scan: anti_diagonal (d, -d), diagonal (d, d), or a
/// full raster; the raster accepts a mask predicate and skips positions where
/// it returns false (unmeasured regions).
std::vector<std::pair<double, double>> scan_schedule(ScanMode mode, double range,
                                                     double step);
std::vector<std::pair<double, double>> scan_schedule(
    ScanMode mode, double range, double step,
    const std::function<bool(double, double)>& mask);

/// Calibration helper: the largest slit-window integral of the normalized
/// distribution over the schedule (used to express rate constants as peak
/// count rates).
double peak_window_integral(const JointDistribution& dist,
                            const OpticalSystem& system, double slit_width,
                            const std::vector<std::pair<double, double>>& positions);

}  // namespace spdc
