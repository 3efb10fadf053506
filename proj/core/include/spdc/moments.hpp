#pragma once

#include <cstddef>
#include <span>

namespace spdc {

/// Weighted first moment sum(w x)/sum(w) of a nonnegative sample set.
/// Throws NumericError if the total mass is not positive.
double mean_of(std::span<const double> coords, std::span<const double> weights);

/// Weighted second central moment sum(w (x-mu)^2)/sum(w).
///
/// Intended as the moment-based cross-check of fitted widths (fits are the
/// primary width estimator for measured profiles). Requires at least 3
/// nonzero samples unless the distribution is a single point mass, in which
/// case the variance is 0.
double variance_of(std::span<const double> coords,
                   std::span<const double> weights);

}  // namespace spdc
