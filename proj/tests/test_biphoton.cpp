#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "spdc/biphoton.hpp"
#include "spdc/errors.hpp"
#include "spdc/fft.hpp"
#include "spdc/fit.hpp"
#include "spdc/moments.hpp"
#include "spdc/pump.hpp"

using namespace spdc;

namespace {

constexpr double kWaist = 0.11e-3;
const double kK = 2.0 * std::numbers::pi * 1.8 / 810e-9;  // 1.3963e7
const double kKp = 2.0 * std::numbers::pi * 1.8 / 405e-9;

PhaseMatching default_pm() { return PhaseMatching{5e-3, kK, kK, kKp}; }

}  // namespace

TEST_CASE("phase mismatch at the collinear point is zero") {
  const auto pm = default_pm();
  CHECK(phase_mismatch(0.0, 0.0, pm, MismatchModel::Exact) == 0.0);
  CHECK(phase_mismatch(0.0, 0.0, pm, MismatchModel::Paraxial) == 0.0);
}

TEST_CASE("paraxial mismatch agrees with the exact square-root form") {
  const auto pm = default_pm();
  const double q = 1e5;
  const double paraxial = phase_mismatch(q, -q, pm, MismatchModel::Paraxial);
  const double exact = phase_mismatch(q, -q, pm, MismatchModel::Exact);
  CHECK(paraxial == doctest::Approx(716.3).epsilon(1e-3));
  CHECK(paraxial == doctest::Approx(exact).epsilon(1e-4));  // 0.01%
}

TEST_CASE("paraxial mismatch depends only on the difference") {
  const auto pm = default_pm();
  const double base = phase_mismatch(3e4, -2e4, pm, MismatchModel::Paraxial);
  for (double shift : {1e4, -4e4, 1.3e5}) {
    CHECK(phase_mismatch(3e4 + shift, -2e4 + shift, pm,
                         MismatchModel::Paraxial) ==
          doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("evanescent input rejected in exact mode") {
  const auto pm = default_pm();
  CHECK_THROWS(phase_mismatch(1.5e7, 0.0, pm, MismatchModel::Exact));
}

TEST_CASE("phase matching amplitude") {
  const auto pm = default_pm();
  CHECK(phase_matching_amplitude(0.0, pm) == 1.0);
  CHECK(phase_matching_amplitude(5e4, pm) ==
        phase_matching_amplitude(-5e4, pm));

  // Root-find oracle: first zero of the implemented amplitude by
  // bisection, compared against sqrt(4 pi k / L).
  double lo = 1e5, hi = 2.5e5;
  REQUIRE(phase_matching_amplitude(lo, pm) > 0.0);
  REQUIRE(phase_matching_amplitude(hi, pm) < 0.0);
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phase_matching_amplitude(mid, pm) > 0.0 ? lo : hi) = mid;
  }
  const double zero = 0.5 * (lo + hi);
  CHECK(zero == doctest::Approx(std::sqrt(4.0 * std::numbers::pi * kK / 5e-3))
                    .epsilon(1e-10));
  CHECK(zero == doctest::Approx(1.873e5).epsilon(1e-3));
}

TEST_CASE("sinc series branch is continuous") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(9.9e-5) == doctest::Approx(sinc(1.01e-4)).epsilon(1e-10));
}

TEST_CASE("coherent joint momentum amplitude matches the direct construction") {
  Grid1D grid(256, 8e-6);
  const auto field = coherent_field(grid, kWaist, kInfinite, kKp);
  const auto phi = joint_momentum_amplitude(field, default_pm());
  const std::size_t n = grid.size();
  FftEngine1D engine(n);
  const auto angular = engine.to_frequency(grid, field.values());
  const auto pm = default_pm();
  for (std::size_t s = 40; s < n; s += 41) {
    for (std::size_t i = 17; i < n; i += 37) {
      const long sum = static_cast<long>(s + i) - static_cast<long>(n / 2);
      std::complex<double> expected = 0.0;
      if (sum >= 0 && sum < static_cast<long>(n)) {
        const double qm = (grid.q(s) - grid.q(i)) / std::numbers::sqrt2;
        expected = angular[static_cast<std::size_t>(sum)] *
                   phase_matching_amplitude(qm, pm);
      }
      CHECK(std::abs(phi[s * n + i] - expected) < 1e-14);
    }
  }
}

TEST_CASE("plane-wave pump concentrates on the anti-diagonal") {
  Grid1D grid(256, 8e-6);
  const auto field = coherent_field(grid, 5e-3, kInfinite, kKp);
  const auto phi = joint_momentum_amplitude(field, default_pm());
  const std::size_t n = grid.size();
  double on_axis = 0.0, off_axis = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = std::norm(phi[s * n + i]);
      const long sum = static_cast<long>(s + i) - static_cast<long>(n);
      if (std::abs(sum) <= 1) {
        on_axis += v;
      } else if (std::abs(sum) > 4) {
        off_axis += v;
      }
    }
  }
  // residual off-axis mass is the diffraction of the implicit grid aperture
  CHECK(off_axis < 1e-6 * on_axis);
}

TEST_CASE("coherent pump: q_+ variance matches the collimated formula") {
  Grid1D grid(256, 8e-6);
  const PumpSpec spec{CoherentGaussian{kWaist, kInfinite}, kKp};
  const auto dist = joint_momentum_distribution(spec, default_pm(), grid);
  CHECK(dist.domain() == Domain::Frequency);
  // Independent oracle: Dq+^2 = gsm_delta_p_plus_sq in the coherent limit.
  const double expected = gsm_delta_p_plus_sq(kWaist, kInfinite, kInfinite, kKp);
  CHECK(dist.rotated_variance(true) == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("ensemble with zero modulation equals the coherent result") {
  Grid1D grid(128, 12e-6);
  const PumpSpec coh{CoherentGaussian{kWaist, kInfinite}, kKp};
  const PumpSpec ens{PhaseScreenEnsemble{kWaist, kInfinite, 110e-6, 0.0, 40, 3},
                     kKp};
  const auto a = joint_momentum_distribution(coh, default_pm(), grid);
  const auto b = joint_momentum_distribution(ens, default_pm(), grid);
  double max_rel = 0.0, peak = 0.0;
  for (std::size_t idx = 0; idx < a.values().size(); ++idx) {
    peak = std::max(peak, a.values()[idx]);
    max_rel = std::max(max_rel, std::abs(a.values()[idx] - b.values()[idx]));
  }
  CHECK(max_rel <= 1e-12 * peak);
}

TEST_CASE("Schell-model pump: q_+ variance matches the formula") {
  Grid1D grid(512, 4e-6);
  const double lc = kWaist / 2.0;
  const PumpSpec spec{GaussianSchell{kWaist, kInfinite, lc}, kKp};
  const auto dist = joint_momentum_distribution(spec, default_pm(), grid);
  const double expected = gsm_delta_p_plus_sq(kWaist, kInfinite, lc, kKp);
  CHECK(dist.rotated_variance(true) == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("momentum distribution factorizes in rotated coordinates") {
  Grid1D grid(256, 6e-6);
  const auto pm = default_pm();
  const PumpSpec coh{CoherentGaussian{kWaist, kInfinite}, kKp};
  const PumpSpec gsm{GaussianSchell{kWaist, kInfinite, 50e-6}, kKp};
  const PumpSpec ens{PhaseScreenEnsemble{kWaist, kInfinite, 110e-6, 2.0, 60, 9},
                     kKp};
  for (const auto& spec : {coh, gsm, ens}) {
    const auto dist = joint_momentum_distribution(spec, pm, grid);
    CHECK(std::abs(dist.rotated_correlation()) < 0.02);
  }
}

TEST_CASE("position and momentum masses agree (Parseval)") {
  Grid1D grid(256, 6e-6);
  const auto pm = default_pm();
  const PumpSpec coh{CoherentGaussian{kWaist, kInfinite}, kKp};
  const auto mom = joint_momentum_distribution(coh, pm, grid);
  const auto pos = joint_position_distribution(coh, pm, grid);
  CHECK(pos.total_mass() == doctest::Approx(mom.total_mass()).epsilon(1e-9));
}

TEST_CASE("position x_+ width carries the pump profile") {
  Grid1D grid(512, 3e-6);
  const auto pm = default_pm();
  const PumpSpec coh{CoherentGaussian{kWaist, kInfinite}, kKp};
  const auto pos = joint_position_distribution(coh, pm, grid);
  const auto sections = sections_rotated(pos);
  const auto fit = fit_profile(sections.axis, sections.plus);
  REQUIRE(fit.converged);
  // The common birth zone stretches the pump intensity profile by sqrt(2)
  // along the diagonal: sigma_+ = sqrt(2) w.
  CHECK(fit.sigma == doctest::Approx(std::numbers::sqrt2 * kWaist).epsilon(0.02));
}

TEST_CASE("position x_- section is pump independent") {
  Grid1D grid(512, 3e-6);
  const auto pm = default_pm();
  const PumpSpec coh{CoherentGaussian{kWaist, kInfinite}, kKp};
  const PumpSpec ens{PhaseScreenEnsemble{kWaist, kInfinite, 40e-6, 2.0, 30, 21},
                     kKp};
  const auto sec_c = sections_rotated(joint_position_distribution(coh, pm, grid));
  const auto sec_e = sections_rotated(joint_position_distribution(ens, pm, grid));
  double peak_c = 0.0, peak_e = 0.0;
  for (std::size_t j = 0; j < sec_c.axis.size(); ++j) {
    peak_c = std::max(peak_c, sec_c.minus[j]);
    peak_e = std::max(peak_e, sec_e.minus[j]);
  }
  double max_dev = 0.0;
  for (std::size_t j = 0; j < sec_c.axis.size(); ++j) {
    max_dev = std::max(max_dev, std::abs(sec_c.minus[j] / peak_c -
                                         sec_e.minus[j] / peak_e));
  }
  CHECK(max_dev < 0.03);
}

TEST_CASE("near-plane-wave pump gives a flat x_+ profile") {
  Grid1D grid(512, 8e-6);
  const auto pm = default_pm();
  const PumpSpec wide{CoherentGaussian{5e-3, kInfinite}, kKp};
  const auto pos = joint_position_distribution(wide, pm, grid);
  const auto sections = sections_rotated(pos);
  double lo = 1e300, hi = 0.0;
  for (std::size_t j = 0; j < sections.axis.size(); ++j) {
    if (std::abs(sections.axis[j]) > 0.5e-3) continue;
    lo = std::min(lo, sections.plus[j]);
    hi = std::max(hi, sections.plus[j]);
  }
  CHECK((hi - lo) / hi < 0.05);
}

TEST_CASE("rotated sections of synthetic distributions") {
  Grid1D grid(128, 1e-3);

  SUBCASE("point mass maps to sqrt(2) a on the plus axis") {
    std::vector<double> v(grid.size() * grid.size(), 0.0);
    const std::size_t j = 80;
    v[j * grid.size() + j] = 1.0;
    const JointDistribution dist(grid, v, Domain::Position);
    const auto sections = sections_rotated(dist);
    const double a = grid.x(j);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < sections.plus.size(); ++i) {
      if (sections.plus[i] > sections.plus[arg]) arg = i;
    }
    CHECK(std::abs(sections.axis[arg] - std::numbers::sqrt2 * a) <=
          2.0 * grid.dx());
    arg = 0;
    for (std::size_t i = 0; i < sections.minus.size(); ++i) {
      if (sections.minus[i] > sections.minus[arg]) arg = i;
    }
    CHECK(std::abs(sections.axis[arg]) <= 2.0 * grid.dx());
  }

  SUBCASE("isotropic Gaussian has identical rotated marginals") {
    std::vector<double> v(grid.size() * grid.size());
    const double s2 = 2.0 * 8e-3 * 8e-3;
    for (std::size_t a = 0; a < grid.size(); ++a) {
      for (std::size_t b = 0; b < grid.size(); ++b) {
        v[a * grid.size() + b] =
            std::exp(-(grid.x(a) * grid.x(a) + grid.x(b) * grid.x(b)) / s2);
      }
    }
    const JointDistribution dist(grid, v, Domain::Position);
    const auto sections = sections_rotated(dist);
    for (std::size_t j = 0; j < sections.axis.size(); ++j) {
      CHECK(sections.plus[j] == doctest::Approx(sections.minus[j]).epsilon(1e-9));
    }
  }

  SUBCASE("anisotropic product Gaussian widths recovered within 1%") {
    const double sp = 12e-3, sm = 4e-3;
    std::vector<double> v(grid.size() * grid.size());
    for (std::size_t a = 0; a < grid.size(); ++a) {
      for (std::size_t b = 0; b < grid.size(); ++b) {
        const double up = (grid.x(a) + grid.x(b)) / std::numbers::sqrt2;
        const double um = (grid.x(a) - grid.x(b)) / std::numbers::sqrt2;
        v[a * grid.size() + b] = std::exp(-up * up / (2.0 * sp * sp) -
                                          um * um / (2.0 * sm * sm));
      }
    }
    const JointDistribution dist(grid, v, Domain::Position);
    const auto sections = sections_rotated(dist);
    const auto fp = fit_profile(sections.axis, sections.plus);
    const auto fm = fit_profile(sections.axis, sections.minus);
    REQUIRE(fp.converged);
    REQUIRE(fm.converged);
    CHECK(fp.sigma == doctest::Approx(sp).epsilon(0.01));
    CHECK(fm.sigma == doctest::Approx(sm).epsilon(0.01));
  }
}

TEST_CASE("grid too small for the pump spectrum is rejected") {
  Grid1D grid(64, 0.25e-6);
  const auto field = coherent_field(grid, 4e-6, kInfinite, kKp);
  CHECK_THROWS_AS(joint_momentum_amplitude(field, default_pm()), NumericError);
}
