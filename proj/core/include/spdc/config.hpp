#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spdc/biphoton.hpp"
#include "spdc/grid.hpp"
#include "spdc/pump.hpp"
#include "spdc/virtual_lab.hpp"

namespace spdc {

/// Run configuration. Defaults reproduce the reference apparatus: 0.11 mm
/// pump waist, 5 mm crystal, 405 nm pump / 810 nm degenerate detection,
/// 50/150 mm imaging relay, 100 mm Fourier lens, 100 um slits, 0.11 mm screen
/// correlation width, 300 screen realizations, 5 repeated measurements.
struct PumpConfig {
  std::string model = "coherent";  // coherent|gaussian_schell|phase_screen_ensemble
  double w = 0.11e-3;
  double R = kInfinite;
  double l_c = kInfinite;
  double delta_phi = 0.11e-3;
  double phi_0 = 0.0;
  std::size_t n_realizations = 300;
  std::uint64_t seed = 12345;
  double lambda_p = 405e-9;
  double n_p = 1.8;

  double k_p() const;
};

struct CrystalConfig {
  double length = 5e-3;
  double lambda_s = 810e-9;
  double lambda_i = 810e-9;
  double n_s = 1.8;
  double n_i = 1.8;
};

struct GridConfig {
  std::size_t n = 1024;
  double dx = 3.0e-6;
};

struct OpticsConfig {
  double f1 = 50e-3;
  double f2 = 150e-3;
  double f3 = 100e-3;
};

struct ScanConfig {
  double slit_width = 100e-6;
  double range = 0.0;  // slit offset range [m]; 0 = auto (3.5 measured sigma)
  double step = 0.0;   // slit offset step [m]; 0 = auto (25 points over range)
  double dwell = 60.0;
  double rate_constant = 0.0;          // counts/s; 0 = auto (peak ~5/s)
  double singles_rate_constant = 0.0;  // counts/s; 0 = auto (peak ~300/s)
  std::size_t repeats = 5;
};

struct SweepConfig {
  std::vector<double> phi_0 = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0};
};

struct ReportConfig {
  double significance_k = 0.0;  // verdict margin multiplier on the error bar
};

struct OutputConfig {
  std::string dir = "out";
  bool csv = true;
  bool svg = true;
};

struct RunConfig {
  PumpConfig pump;
  CrystalConfig crystal;
  GridConfig grid;
  OpticsConfig optics;
  ScanConfig scan;
  SweepConfig sweep;
  ReportConfig report;
  OutputConfig output;

  PumpSpec pump_spec() const;
  PhaseMatching phase_matching() const;
  Grid1D make_grid() const;
  Imaging4f imaging_system() const;
  FourierLens fourier_system() const;

  /// Cross-field validation, including the grid sizing rules:
  ///   dx <= min(w, l_c, delta_phi)/4          (features resolved)
  ///   n dx >= 8 max(w, 2 pi sqrt(L/(4 pi k_s)))  (near/far field supported)
  ///   dq <= sqrt(2 Dp+^2)/2                   (pump angular profile resolved)
  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Parse a strict-schema JSON config; unknown keys are rejected with their
/// path. Only keys present in the file override defaults. "inf" (string) is
/// accepted for R and l_c.
RunConfig parse_config(const std::string& json_text);

/// Load from file (ConfigError on missing/unreadable file).
RunConfig load_config(const std::string& path);

/// Serialize the fully resolved configuration (reparseable).
std::string config_to_json(const RunConfig& config);

}  // namespace spdc
