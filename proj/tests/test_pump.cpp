#include <numbers>
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "spdc/errors.hpp"
#include "spdc/fit.hpp"
#include "spdc/moments.hpp"
#include "spdc/pump.hpp"

using namespace spdc;

namespace {
constexpr double kWaist = 0.11e-3;
constexpr double kKp = 2.0 * std::numbers::pi * 1.8 / 405e-9;
}  // namespace

TEST_CASE("coherence length from modulation strength") {
  CHECK(coherence_length_of(110e-6, 1.0) == doctest::Approx(110e-6));
  CHECK(std::isinf(coherence_length_of(110e-6, 0.0)));
  CHECK(coherence_length_of(110e-6, 4.0) == doctest::Approx(27.5e-6));
  CHECK_THROWS(coherence_length_of(-1e-6, 1.0));
  CHECK_THROWS(coherence_length_of(110e-6, -0.5));
}

TEST_CASE("angular variance formula") {
  CHECK(gsm_delta_p_plus_sq(kWaist, kInfinite, kInfinite, kKp) ==
        doctest::Approx(1.0331e7).epsilon(1e-4));
  CHECK(gsm_delta_p_plus_sq(kWaist, kInfinite, 0.11e-3, kKp) ==
        doctest::Approx(5.165e7).epsilon(1e-3));
  CHECK(gsm_delta_p_plus_sq(kWaist, 1.0, kInfinite, 1.5514e7) ==
        doctest::Approx(1.179e7).epsilon(1e-3));
  CHECK_THROWS(gsm_delta_p_plus_sq(-1.0, kInfinite, kInfinite, kKp));
}

TEST_CASE("analytic CSD: coherent limit is rank one") {
  Grid1D grid(128, 8e-6);
  const auto csd = analytic_csd(grid, GaussianSchell{kWaist, kInfinite, kInfinite}, kKp);
  double max_dev = 0.0;
  for (std::size_t j1 = 0; j1 < grid.size(); ++j1) {
    const double e1 = std::exp(-grid.x(j1) * grid.x(j1) / (4.0 * kWaist * kWaist));
    for (std::size_t j2 = 0; j2 < grid.size(); ++j2) {
      const double e2 = std::exp(-grid.x(j2) * grid.x(j2) / (4.0 * kWaist * kWaist));
      max_dev = std::max(max_dev, std::abs(csd.at(j1, j2) - std::complex<double>(e1 * e2)));
    }
  }
  CHECK(max_dev < 1e-12);
}

TEST_CASE("analytic CSD: diagonal is the intensity profile for any l_c, R") {
  Grid1D grid(256, 4e-6);
  for (const auto& gs : {GaussianSchell{kWaist, kInfinite, kInfinite},
                         GaussianSchell{kWaist, kInfinite, 40e-6},
                         GaussianSchell{kWaist, 1.0, 25e-6}}) {
    const auto diag = analytic_csd(grid, gs, kKp).diagonal();
    for (std::size_t j = 0; j < grid.size(); j += 17) {
      const double x = grid.x(j);
      CHECK(diag[j] == doctest::Approx(std::exp(-x * x / (2.0 * kWaist * kWaist)))
                           .epsilon(1e-12));
    }
  }
}

TEST_CASE("analytic CSD rejects under-resolved coherence length") {
  Grid1D grid(128, 8e-6);
  CHECK_THROWS_AS(analytic_csd(grid, GaussianSchell{kWaist, kInfinite, 10e-6}, kKp),
                  ConfigError);
}

// Independent oracle: the angular intensity of the analytic CSD, obtained by a
// numerical double Fourier transform, must carry the variance the closed
// formula predicts: <q^2> = 2 * Dp+^2 (q is the pump transverse wavenumber
// and p_+ = (p_s + p_i)/sqrt(2)).
TEST_CASE("angular intensity variance matches the closed formula to 0.5%") {
  Grid1D grid(512, 4e-6);
  struct Case {
    double l_c;
    double R;
  };
  for (const auto& c : {Case{kInfinite, kInfinite}, Case{110e-6, kInfinite},
                        Case{55e-6, kInfinite}, Case{110e-6, 1.0},
                        Case{kInfinite, 1.0}}) {
    const auto csd = analytic_csd(grid, GaussianSchell{kWaist, c.R, c.l_c}, kKp);
    const double var_oracle = angular_intensity(csd).variance();
    const double var_formula =
        2.0 * gsm_delta_p_plus_sq(kWaist, c.R, c.l_c, kKp);
    CHECK(var_oracle == doctest::Approx(var_formula).epsilon(5e-3));
  }
}

TEST_CASE("phase screens: zero modulation is the zero screen") {
  Grid1D grid(256, 3.4375e-6);
  const auto phi = make_phase_screen(grid, 110e-6, 0.0, 1, 0);
  for (double v : phi) CHECK(v == 0.0);
}

TEST_CASE("phase screens are deterministic per (seed, index)") {
  Grid1D grid(256, 3.4375e-6);
  const auto a = make_phase_screen(grid, 110e-6, 1.5, 77, 3);
  const auto b = make_phase_screen(grid, 110e-6, 1.5, 77, 3);
  const auto c = make_phase_screen(grid, 110e-6, 1.5, 77, 4);
  CHECK(a == b);
  CHECK(a != c);
}

// Monte-Carlo oracle: sample variance of phi over many screens is
// phi_0^2; the empirical correlation of g at lag delta_phi is exp(-1/2).
// Screens of 256 samples with a 32-sample correlation width carry ~8
// effective samples each; 2000 screens give >= 1e4.
TEST_CASE("phase screen statistics") {
  const double delta_phi = 110e-6;
  const double phi0 = 1.3;
  Grid1D grid(256, delta_phi / 32.0);
  const std::size_t n_screens = 2000;
  const std::size_t lag = 32;  // exactly delta_phi
  double sum_sq = 0.0, sum_lag = 0.0;
  std::size_t count_sq = 0, count_lag = 0;
  for (std::size_t s = 0; s < n_screens; ++s) {
    const auto phi = make_phase_screen(grid, delta_phi, phi0, 2024, s);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      sum_sq += phi[j] * phi[j];
      ++count_sq;
      if (j + lag < grid.size()) {
        sum_lag += phi[j] * phi[j + lag];
        ++count_lag;
      }
    }
  }
  const double var = sum_sq / static_cast<double>(count_sq);
  const double corr = sum_lag / static_cast<double>(count_lag) / var;
  // ~16k effective samples -> 3 sigma ~ 3.5% on the variance
  CHECK(var == doctest::Approx(phi0 * phi0).epsilon(0.04));
  CHECK(corr == doctest::Approx(std::exp(-0.5)).epsilon(0.05));
}

TEST_CASE("ensemble fields preserve the intensity profile") {
  Grid1D grid(256, 3.4375e-6);
  const PhaseScreenEnsemble spec{kWaist, kInfinite, 110e-6, 2.0, 4, 11};
  for (std::uint64_t idx : {0ull, 1ull, 3ull}) {
    const auto field = ensemble_field(grid, spec, kKp, idx);
    for (std::size_t j = 0; j < grid.size(); j += 13) {
      const double x = grid.x(j);
      CHECK(std::norm(field.values()[j]) ==
            doctest::Approx(std::exp(-x * x / (2.0 * kWaist * kWaist)))
                .epsilon(1e-10));
    }
  }
}

TEST_CASE("zero-modulation ensemble field is the coherent field") {
  Grid1D grid(128, 7e-6);
  const PhaseScreenEnsemble spec{kWaist, 2.0, 110e-6, 0.0, 1, 5};
  const auto a = ensemble_field(grid, spec, kKp, 0);
  const auto b = coherent_field(grid, kWaist, 2.0, kKp);
  CHECK(a.values() == b.values());
}

TEST_CASE("csd_from_ensemble: repeated coherent field gives rank-one W") {
  Grid1D grid(64, 14e-6);
  const auto e = coherent_field(grid, kWaist, kInfinite, kKp);
  const auto csd = csd_from_ensemble({e, e, e});
  for (std::size_t j1 = 0; j1 < grid.size(); j1 += 7) {
    for (std::size_t j2 = 0; j2 < grid.size(); j2 += 7) {
      const auto expected = e.values()[j1] * std::conj(e.values()[j2]);
      CHECK(std::abs(csd.at(j1, j2) - expected) < 1e-14);
    }
  }
  // diagonal equals the mean intensity exactly
  const auto diag = csd.diagonal();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CHECK(diag[j] == doctest::Approx(std::norm(e.values()[j])).epsilon(1e-14));
  }
  CHECK_THROWS(csd_from_ensemble({e}));
}

// Monte-Carlo oracle: the ensemble CSD converges to
// exp(-(x1^2+x2^2)/(4w^2)) exp(-phi_0^2 (1 - rho)) at a 1/sqrt(N) rate.
TEST_CASE("ensemble CSD converges to the analytic coherence") {
  const double w = 60e-6;
  const double delta_phi = 60e-6;
  const double phi0 = 2.0;
  Grid1D grid(128, delta_phi / 16.0);

  auto mean_deviation = [&](std::size_t N, std::uint64_t seed) {
    std::vector<Field1D> fields;
    fields.reserve(N);
    const PhaseScreenEnsemble spec{w, kInfinite, delta_phi, phi0, N, seed};
    for (std::size_t r = 0; r < N; ++r) {
      fields.push_back(ensemble_field(grid, spec, kKp, r));
    }
    const auto csd = csd_from_ensemble(fields);
    double dev = 0.0;
    std::size_t count = 0;
    for (std::size_t j1 = 0; j1 < grid.size(); j1 += 3) {
      const double x1 = grid.x(j1);
      const double a1 = std::exp(-x1 * x1 / (4.0 * w * w));
      if (a1 * a1 < 1e-2) continue;
      for (std::size_t j2 = 0; j2 < grid.size(); j2 += 3) {
        const double x2 = grid.x(j2);
        const double a2 = std::exp(-x2 * x2 / (4.0 * w * w));
        if (a2 * a2 < 1e-2) continue;
        const double d = x1 - x2;
        const double rho = std::exp(-d * d / (2.0 * delta_phi * delta_phi));
        const double gamma = std::exp(-phi0 * phi0 * (1.0 - rho));
        // normalized coherence deviation
        dev += std::abs(csd.at(j1, j2) / (a1 * a2) - gamma);
        ++count;
      }
    }
    return dev / static_cast<double>(count);
  };

  const double d100 = mean_deviation(100, 31);
  const double d400 = mean_deviation(400, 32);
  CHECK(d400 < 0.05);
  CHECK(d100 / d400 == doctest::Approx(2.0).epsilon(0.5));
}

// Fit-based oracle: for phi_0 >= 2 the fitted width of |W_est| vs lag is
// delta_phi / phi_0 within 10%.
TEST_CASE("ensemble coherence length matches delta_phi/phi_0") {
  const double w = 0.5e-3;  // wide beam so the lag profile is pure coherence
  const double delta_phi = 60e-6;
  const double phi0 = 2.5;
  Grid1D grid(256, delta_phi / 12.0);
  const std::size_t N = 400;
  std::vector<Field1D> fields;
  fields.reserve(N);
  const PhaseScreenEnsemble spec{w, kInfinite, delta_phi, phi0, N, 7};
  for (std::size_t r = 0; r < N; ++r) {
    fields.push_back(ensemble_field(grid, spec, kKp, r));
  }
  const auto csd = csd_from_ensemble(fields);
  // coherence magnitude vs lag through the beam center
  const std::size_t c = grid.center_index();
  const auto diag = csd.diagonal();
  std::vector<double> lags, mu;
  for (long m = -60; m <= 60; ++m) {
    const std::size_t j = static_cast<std::size_t>(static_cast<long>(c) + m);
    lags.push_back(grid.x(j) - grid.x(c));
    mu.push_back(std::abs(csd.at(c, j)) / std::sqrt(diag[c] * diag[j]));
  }
  const auto fit = fit_profile(lags, mu);
  REQUIRE(fit.converged);
  CHECK(fit.sigma == doctest::Approx(delta_phi / phi0).epsilon(0.10));
}

TEST_CASE("pump spec validation") {
  PumpSpec spec{CoherentGaussian{-1.0, kInfinite}, kKp};
  CHECK_THROWS(spec.validate());
  spec = PumpSpec{PhaseScreenEnsemble{kWaist, kInfinite, 110e-6, 2.0, 0, 1}, kKp};
  CHECK_THROWS(spec.validate());
  spec = PumpSpec{GaussianSchell{kWaist, kInfinite, 50e-6}, kKp};
  CHECK_NOTHROW(spec.validate());
}
