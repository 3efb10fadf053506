#pragma once

#include <optional>
#include <vector>

#include "spdc/analysis_types.hpp"
#include "spdc/biphoton.hpp"
#include "spdc/config.hpp"
#include "spdc/fit.hpp"
#include "spdc/virtual_lab.hpp"

namespace spdc {

/// Everything one virtual experiment produces: both joint distributions, the
/// slit-scan geometry that was actually used (auto-ranged unless configured),
/// the per-repeat scan records and fits, and the aggregated report.
struct Measurement {
  std::optional<JointDistribution> momentum;
  std::optional<JointDistribution> position;

  // Resolved scan parameters (slit offsets) per measurement.
  double range_position = 0.0, step_position = 0.0;
  double range_momentum = 0.0, step_momentum = 0.0;
  double rate_constant_position = 0.0, singles_constant_position = 0.0;
  double rate_constant_momentum = 0.0, singles_constant_momentum = 0.0;

  std::vector<std::vector<CoincidenceRecord>> scans_position;  // per repeat
  std::vector<std::vector<CoincidenceRecord>> scans_momentum;
  std::vector<GaussianFit> fits_x_minus;
  std::vector<GaussianFit> fits_q_plus;

  double var_x_minus = 0.0;   // mean fitted sigma^2 over repeats [m^2]
  double var_p_plus = 0.0;    // mean fitted sigma^2 over repeats [hbar^2 m^-2]
  double err_var_x = 0.0;     // sample std across repeats (NaN if repeats < 2)
  double err_var_p = 0.0;
  std::vector<double> products;  // per repeat [hbar^2]
  EntanglementReport report;
};

/// x_- fit coordinate of an anti-diagonal record / q_+ of a diagonal record.
double rotated_coordinate(const CoincidenceRecord& rec, ScanMode mode);

/// Turn records of one scan into fit points on the rotated coordinate.
std::vector<FitPoint> fit_points(const std::vector<CoincidenceRecord>& records,
                                 ScanMode mode);

/// Run the full virtual experiment for one configuration: build both joint
/// distributions, derive scan ranges and rate constants (where set to auto),
/// simulate `repeats` independent scans of x_- (near field, anti-diagonal)
/// and q_+ (far field, diagonal), fit every scan, and aggregate.
Measurement run_measurements(const RunConfig& config);

/// Distributions only (used by simulate / raster figures).
std::pair<JointDistribution, JointDistribution> build_distributions(
    const RunConfig& config);

}  // namespace spdc
