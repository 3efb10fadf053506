#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace spdc {

/// One scan sample for fitting: coordinate, raw counts and the dwell time
/// that produced them. The fitted observable is the rate counts/dwell.
struct FitPoint {
  double coordinate = 0.0;
  double counts = 0.0;
  double dwell = 1.0;
};

/// Result of a Gaussian peak fit A exp(-(u-mu)^2/(2 sigma^2)) + b.
struct GaussianFit {
  double amplitude = 0.0;
  double center = 0.0;
  double sigma = 0.0;
  double baseline = 0.0;
  /// Parameter covariance, order (A, mu, sigma, b).
  std::array<std::array<double, 4>, 4> covariance{};
  double reduced_chisq = 0.0;
  bool converged = false;
  std::size_t iterations = 0;

  double sigma_error() const;
  double variance() const { return sigma * sigma; }
  /// First-order error of sigma^2.
  double variance_error() const;
};

/// Weighted nonlinear least squares of count rates against a Gaussian with
/// baseline; weights follow the Poisson variance of the counts,
/// w = dwell^2 / max(counts, 1). Levenberg-style damped Gauss-Newton with
/// analytic Jacobian; converged when the relative parameter change drops
/// below 1e-8, capped at 200 iterations (non-convergence is flagged, not
/// thrown).
///
/// Requires >= 5 distinct coordinates and positive total counts; flat data
/// (all counts equal) is rejected as having no peak.
GaussianFit fit_gaussian(std::span<const FitPoint> points);

/// Same model with uniform weights, for noiseless sampled profiles
/// (distribution sections).
GaussianFit fit_profile(std::span<const double> coords,
                        std::span<const double> values);

}  // namespace spdc
