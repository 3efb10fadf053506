#pragma once

#include <cstdint>
#include <random>

namespace spdc {

/// splitmix64 mixing step; used to derive independent, reproducible
/// sub-streams from (seed, index) pairs so that ensemble members and scan
/// records can be generated in any order or concurrently.
std::uint64_t splitmix64(std::uint64_t x);

/// Combine a base seed with one or two stream indices into an engine seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index,
                          std::uint64_t subindex);

/// Deterministic random stream with hand-rolled variate transforms.
///
/// std::mt19937_64 output is pinned by the standard, but the distribution
/// adaptors are not, so normal/poisson draws are implemented here to keep
/// byte-identical reruns across standard library versions.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t engine_seed) : engine_(engine_seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal deviate (Marsaglia polar method).
  double normal();

  /// Poisson deviate with the given mean (>= 0). Direct product method for
  /// small means, Hormann's PTRD transformed rejection for large means.
  std::uint64_t poisson(double mean);

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace spdc
