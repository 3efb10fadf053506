#include <doctest.h>

#include <cmath>
#include <vector>

#include "spdc/errors.hpp"
#include "spdc/grid.hpp"
#include "spdc/moments.hpp"
#include "spdc/rng.hpp"

using namespace spdc;

TEST_CASE("variance of a discretized Gaussian") {
  // sigma = 50 um -> 2.5e-9 m^2 within 0.1%
  Grid1D grid(512, 2e-6);
  std::vector<double> w(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    w[j] = std::exp(-x * x / (2.0 * 50e-6 * 50e-6));
  }
  CHECK(variance_of(grid.x_values(), w) ==
        doctest::Approx(2.5e-9).epsilon(1e-3));
}

TEST_CASE("variance degenerate cases") {
  std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  std::vector<double> single = {0.0, 5.0, 0.0, 0.0};
  CHECK(variance_of(x, single) == 0.0);
  std::vector<double> zero = {0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(variance_of(x, zero), NumericError);
  std::vector<double> neg = {1.0, -1.0, 0.0, 0.0};
  CHECK_THROWS(variance_of(x, neg));
}

TEST_CASE("variance of uniform distribution is a^2/3") {
  const double a = 1e-3;
  Grid1D grid(1024, 4e-6);  // extent 4.1 mm
  std::vector<double> w(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    w[j] = std::abs(grid.x(j)) <= a ? 1.0 : 0.0;
  }
  // grid tolerance: the edge cells quantize a to +-dx
  CHECK(variance_of(grid.x_values(), w) ==
        doctest::Approx(a * a / 3.0).epsilon(2.0 * grid.dx() / a));
}

TEST_CASE("variance invariant under translation") {
  std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> w = {1.0, 4.0, 6.0, 4.0, 1.0};
  const double v0 = variance_of(x, w);
  for (auto& xi : x) xi += 17.5;
  CHECK(variance_of(x, w) == doctest::Approx(v0).epsilon(1e-12));
}

TEST_CASE("normal deviates have unit variance and zero mean") {
  RandomStream rs(99);
  const std::size_t n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = rs.normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("poisson mean and dispersion") {
  for (double lambda : {0.5, 8.0, 40.0, 400.0, 4000.0}) {
    RandomStream rs(derive_seed(5, static_cast<std::uint64_t>(lambda)));
    const std::size_t n = 20000;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double k = static_cast<double>(rs.poisson(lambda));
      sum += k;
      sumsq += k * k;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    // mean within 5 sigma of lambda, index of dispersion ~ 1
    CHECK(std::abs(mean - lambda) <
          5.0 * std::sqrt(lambda / static_cast<double>(n)));
    CHECK(var / mean == doctest::Approx(1.0).epsilon(0.08));
  }
}

TEST_CASE("poisson zero mean gives zero counts") {
  RandomStream rs(1);
  CHECK(rs.poisson(0.0) == 0);
}

TEST_CASE("derived streams are reproducible and distinct") {
  RandomStream a(derive_seed(123, 7));
  RandomStream b(derive_seed(123, 7));
  RandomStream c(derive_seed(123, 8));
  bool identical = true, differs = false;
  for (int i = 0; i < 100; ++i) {
    const double va = a.uniform(), vb = b.uniform(), vc = c.uniform();
    identical = identical && (va == vb);
    differs = differs || (va != vc);
  }
  CHECK(identical);
  CHECK(differs);
}
