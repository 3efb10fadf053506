#include "spdc/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "spdc/errors.hpp"

namespace spdc {

namespace {

void check_inputs(std::span<const double> coords,
                  std::span<const double> weights) {
  if (coords.size() != weights.size()) {
    throw std::invalid_argument("moments: coordinate/weight size mismatch");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("moments: weights must be finite and >= 0");
    }
  }
}

}  // namespace

double mean_of(std::span<const double> coords, std::span<const double> weights) {
  check_inputs(coords, weights);
  double mass = 0.0, first = 0.0;
  for (std::size_t j = 0; j < coords.size(); ++j) {
    mass += weights[j];
    first += weights[j] * coords[j];
  }
  if (!(mass > 0.0)) {
    throw NumericError("mean_of: empty distribution (total mass is zero)");
  }
  return first / mass;
}

double variance_of(std::span<const double> coords,
                   std::span<const double> weights) {
  check_inputs(coords, weights);
  std::size_t nonzero = 0;
  for (double w : weights) {
    if (w > 0.0) ++nonzero;
  }
  if (nonzero == 0) {
    throw NumericError("variance_of: empty distribution (total mass is zero)");
  }
  if (nonzero == 1) return 0.0;  // single point mass
  if (nonzero < 3) {
    throw std::invalid_argument("variance_of: need at least 3 nonzero samples");
  }
  const double mu = mean_of(coords, weights);
  double mass = 0.0, second = 0.0;
  for (std::size_t j = 0; j < coords.size(); ++j) {
    const double d = coords[j] - mu;
    mass += weights[j];
    second += weights[j] * d * d;
  }
  return second / mass;
}

}  // namespace spdc
