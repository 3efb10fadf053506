#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "spdc/fft.hpp"
#include "spdc/grid.hpp"
#include "spdc/rng.hpp"

using namespace spdc;

namespace {

Field1D gaussian_field(const Grid1D& grid, double w) {
  std::vector<std::complex<double>> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    v[j] = std::exp(-x * x / (4.0 * w * w));
  }
  return Field1D(grid, std::move(v), Domain::Position);
}

Field1D random_field(const Grid1D& grid, std::uint64_t seed) {
  RandomStream rs(seed);
  std::vector<std::complex<double>> v(grid.size());
  for (auto& c : v) c = {rs.normal(), rs.normal()};
  return Field1D(grid, std::move(v), Domain::Position);
}

}  // namespace

TEST_CASE("grid invariants") {
  Grid1D grid(256, 2e-6);
  CHECK(grid.dq() * grid.dx() * static_cast<double>(grid.size()) ==
        doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-15));
  CHECK(grid.x(grid.center_index()) == 0.0);
  CHECK(grid.q(grid.center_index()) == 0.0);
  auto xs = grid.x_values();
  for (std::size_t j = 1; j < xs.size(); ++j) CHECK(xs[j] > xs[j - 1]);
  // symmetric about 0 up to the one extra point at the low end
  for (std::size_t j = 1; j < xs.size(); ++j) {
    CHECK(xs[j] == doctest::Approx(-xs[grid.size() - j]).epsilon(1e-12));
  }
  CHECK_THROWS(Grid1D(100, 1e-6));  // not a power of two
  CHECK_THROWS(Grid1D(4, 1e-6));    // too small
  CHECK_THROWS(Grid1D(256, -1e-6));
}

TEST_CASE("non-finite fields rejected") {
  Grid1D grid(64, 1e-6);
  std::vector<std::complex<double>> v(64, 1.0);
  v[3] = std::complex<double>(std::nan(""), 0.0);
  CHECK_THROWS(Field1D(grid, v, Domain::Position));
}

TEST_CASE("Gaussian transforms to Gaussian with width 1/(2w)") {
  // exp(-x^2/(4w^2)) -> 2w sqrt(pi) exp(-q^2 w^2); amplitude width sigma_q
  // such that exponent q^2 w^2 = q^2/(2 sigma^2) with sigma = 1/(w sqrt(2)).
  const double w = 50e-6;
  Grid1D grid(1024, 1.5e-6);
  const auto F = fft_physical(gaussian_field(grid, w));
  const double expected_peak = 2.0 * w * std::sqrt(std::numbers::pi);
  // width check to 0.1%: compare log-ratio at a probe point to the analytic
  // Gaussian, which pins the width
  const auto& vals = F.values();
  const std::size_t c = grid.center_index();
  CHECK(vals[c].real() == doctest::Approx(expected_peak).epsilon(1e-6));
  for (std::size_t off : {20u, 40u, 80u}) {
    const double q = F.grid().q(c + off);
    const double expected = expected_peak * std::exp(-q * q * w * w);
    CHECK(vals[c + off].real() == doctest::Approx(expected).epsilon(1e-3));
    CHECK(std::abs(vals[c + off].imag()) < 1e-12 * expected_peak);
  }
}

TEST_CASE("single-pixel spike has flat magnitude spectrum") {
  Grid1D grid(128, 1e-6);
  std::vector<std::complex<double>> v(grid.size(), 0.0);
  v[37] = 1.0;
  const auto F = fft_physical(Field1D(grid, v, Domain::Position));
  for (const auto& c : F.values()) {
    CHECK(std::abs(c) == doctest::Approx(grid.dx()).epsilon(1e-12));
  }
}

TEST_CASE("round trip is identity to 1e-10") {
  Grid1D grid(512, 0.7e-6);
  const auto f = random_field(grid, 42);
  const auto back = ifft_physical(fft_physical(f));
  double max_err = 0.0, max_mag = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    max_err = std::max(max_err, std::abs(back.values()[j] - f.values()[j]));
    max_mag = std::max(max_mag, std::abs(f.values()[j]));
  }
  CHECK(max_err / max_mag < 1e-10);
}

TEST_CASE("Parseval holds to 1e-10 for random fields") {
  Grid1D grid(256, 1.3e-6);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const auto f = random_field(grid, seed);
    const auto F = fft_physical(f);
    CHECK(F.power() == doctest::Approx(f.power()).epsilon(1e-10));
  }
}

TEST_CASE("real even input gives real spectrum") {
  Grid1D grid(256, 1e-6);
  std::vector<std::complex<double>> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    v[j] = std::cos(x * 3e5) * std::exp(-x * x / 2e-9);
  }
  // symmetrize exactly: value at -x equals value at +x
  for (std::size_t j = 1; j < grid.size(); ++j) {
    v[grid.size() - j] = v[j];
  }
  const auto F = fft_physical(Field1D(grid, v, Domain::Position));
  double peak = 0.0;
  for (const auto& c : F.values()) peak = std::max(peak, std::abs(c));
  for (const auto& c : F.values()) {
    CHECK(std::abs(c.imag()) <= 1e-10 * peak);
  }
}

TEST_CASE("2D inverse transform matches two 1D passes") {
  const std::size_t n = 32;
  Grid1D grid(n, 2e-6);
  RandomStream rs(7);
  std::vector<std::complex<double>> m(n * n);
  for (auto& c : m) c = {rs.normal(), rs.normal()};

  auto expected = m;
  {
    // rows then columns with the 1D engine
    FftEngine1D engine(n);
    std::vector<std::complex<double>> tmp(n);
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<std::complex<double>> row(expected.begin() + r * n,
                                            expected.begin() + (r + 1) * n);
      auto out = engine.to_position(grid, row);
      std::copy(out.begin(), out.end(), expected.begin() + r * n);
    }
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t r = 0; r < n; ++r) tmp[r] = expected[r * n + c];
      auto out = engine.to_position(grid, tmp);
      for (std::size_t r = 0; r < n; ++r) expected[r * n + c] = out[r];
    }
  }
  FftEngine2D engine2(n);
  engine2.to_position_inplace(grid, m);
  double max_mag = 0.0;
  for (const auto& c : expected) max_mag = std::max(max_mag, std::abs(c));
  for (std::size_t idx = 0; idx < m.size(); ++idx) {
    CHECK(std::abs(m[idx] - expected[idx]) < 1e-12 * max_mag);
  }
}
