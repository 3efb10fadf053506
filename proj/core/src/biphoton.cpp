#include "spdc/biphoton.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "spdc/errors.hpp"
#include "spdc/fft.hpp"

namespace spdc {

namespace {

// Fixed block count so ensemble reductions are bit-stable regardless of the
// number of hardware threads: block b accumulates realizations
// [b*N/B, (b+1)*N/B) in index order, partials are combined in block order.
constexpr std::size_t kReductionBlocks = 4;

// Seed for the internal phase-screen ensemble that backs GSM position-space
// distributions (the GSM spec itself carries no seed).
constexpr std::uint64_t kGsmEnsembleSeed = 0x600D5EEDull;

struct EnsembleParams {
  PhaseScreenEnsemble screens;
  double k_p = 0.0;
};

// Maps a pump spec onto the phase-screen ensemble that realizes it; the
// Gaussian Schell model is realized with phi_0 = 3 and delta_phi = phi_0 l_c,
// where the exact ensemble coherence exp(-phi_0^2 (1 - rho)) is already close
// to its Gaussian limit.
EnsembleParams ensemble_params_for(const PumpSpec& spec,
                                   std::size_t gsm_realizations) {
  EnsembleParams p;
  p.k_p = spec.k_p;
  if (const auto* e = std::get_if<PhaseScreenEnsemble>(&spec.model)) {
    p.screens = *e;
  } else if (const auto* g = std::get_if<GaussianSchell>(&spec.model)) {
    const double phi0 = 3.0;
    p.screens = PhaseScreenEnsemble{g->w, g->R, phi0 * g->l_c, phi0,
                                    gsm_realizations, kGsmEnsembleSeed};
  } else {
    const auto& c = std::get<CoherentGaussian>(spec.model);
    p.screens = PhaseScreenEnsemble{c.w, c.R, 1.0, 0.0, 1, 0};
  }
  if (p.screens.phi_0 == 0.0) {
    p.screens.n_realizations = 1;  // all realizations identical
  }
  return p;
}

void check_angular_support(const std::vector<double>& intensity,
                           const char* what) {
  double peak = 0.0;
  for (double v : intensity) peak = std::max(peak, v);
  const double edge = std::max(intensity.front(), intensity.back());
  if (!(peak > 0.0) || edge > 1e-3 * peak) {
    throw NumericError(std::string(what) +
                       ": grid extent too small to contain the pump angular "
                       "spectrum (edge intensity above 1e-3 of peak)");
  }
}

void check_paraxial_regime(const Grid1D& grid, const PhaseMatching& pm) {
  const double q_max = grid.q(grid.size() - 1);
  if (q_max > 0.3 * std::min(pm.k_s, pm.k_i)) {
    throw NumericError(
        "joint distribution: grid reaches beyond the paraxial regime "
        "(q_max > 0.3 k); reduce the grid extent or refine dx");
  }
}

// chi(q_minus) cached over the difference index m = j_s - j_i.
std::vector<double> chi_by_difference(const Grid1D& grid,
                                      const PhaseMatching& pm) {
  const std::size_t n = grid.size();
  std::vector<double> chi(2 * n - 1);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (std::size_t idx = 0; idx < chi.size(); ++idx) {
    const double m = static_cast<double>(idx) - static_cast<double>(n - 1);
    chi[idx] = phase_matching_amplitude(m * grid.dq() * inv_sqrt2, pm);
  }
  return chi;
}

}  // namespace

void PhaseMatching::validate() const {
  if (!(length > 0.0) || !(k_s > 0.0) || !(k_i > 0.0) || !(k_p > 0.0)) {
    throw std::invalid_argument(
        "PhaseMatching: length and wavenumbers must be positive");
  }
}

double sinc(double u) {
  const double au = std::abs(u);
  if (au < 1e-4) {
    const double u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;  // avoids cancellation near 0
  }
  return std::sin(u) / u;
}

double phase_mismatch(double q_s, double q_i, const PhaseMatching& pm,
                      MismatchModel model) {
  pm.validate();
  if (model == MismatchModel::Paraxial) {
    const double d = q_s - q_i;
    return d * d / (4.0 * pm.k_s);
  }
  const double q_p = q_s + q_i;
  if (std::abs(q_s) >= pm.k_s || std::abs(q_i) >= pm.k_i ||
      std::abs(q_p) >= pm.k_p) {
    throw std::invalid_argument(
        "phase_mismatch: evanescent transverse momentum in exact mode");
  }
  const double kappa_p = std::sqrt(pm.k_p * pm.k_p - q_p * q_p);
  const double kappa_s = std::sqrt(pm.k_s * pm.k_s - q_s * q_s);
  const double kappa_i = std::sqrt(pm.k_i * pm.k_i - q_i * q_i);
  // Poling absorbs the collinear residual, so the mismatch vanishes at q = 0.
  return kappa_p - kappa_s - kappa_i + (pm.k_s + pm.k_i - pm.k_p);
}

double phase_matching_amplitude(double q_minus, const PhaseMatching& pm) {
  pm.validate();
  const double arg = pm.length * q_minus * q_minus / (4.0 * pm.k_s);
  return sinc(arg);
}

JointDistribution::JointDistribution(Grid1D grid, std::vector<double> values,
                                     Domain domain)
    : grid_(grid), values_(std::move(values)), domain_(domain) {
  if (values_.size() != grid_.size() * grid_.size()) {
    throw std::invalid_argument("JointDistribution: value size mismatch");
  }
  double mass = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument(
          "JointDistribution: values must be finite and nonnegative");
    }
    mass += v;
  }
  if (!(mass > 0.0)) {
    throw std::invalid_argument("JointDistribution: total mass must be positive");
  }
}

double JointDistribution::cell_measure() const {
  if (domain_ == Domain::Position) {
    return grid_.dx() * grid_.dx();
  }
  const double s = grid_.dq() / (2.0 * std::numbers::pi);
  return s * s;
}

double JointDistribution::total_mass() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum * cell_measure();
}

std::vector<double> JointDistribution::marginal_signal() const {
  const std::size_t n = grid_.size();
  std::vector<double> m(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += values_[s * n + i];
    m[s] = sum;
  }
  return m;
}

std::vector<double> JointDistribution::marginal_idler() const {
  const std::size_t n = grid_.size();
  std::vector<double> m(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < n; ++i) m[i] += values_[s * n + i];
  }
  return m;
}

double JointDistribution::rotated_correlation() const {
  const std::size_t n = grid_.size();
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  double mass = 0.0, mp = 0.0, mm = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double cs = coord(s);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = values_[s * n + i];
      if (w == 0.0) continue;
      const double ci = coord(i);
      mass += w;
      mp += w * (cs + ci) * inv_sqrt2;
      mm += w * (cs - ci) * inv_sqrt2;
    }
  }
  mp /= mass;
  mm /= mass;
  double vp = 0.0, vm = 0.0, cov = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double cs = coord(s);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = values_[s * n + i];
      if (w == 0.0) continue;
      const double ci = coord(i);
      const double dp = (cs + ci) * inv_sqrt2 - mp;
      const double dm = (cs - ci) * inv_sqrt2 - mm;
      vp += w * dp * dp;
      vm += w * dm * dm;
      cov += w * dp * dm;
    }
  }
  return cov / std::sqrt(vp * vm);
}

double JointDistribution::rotated_variance(bool plus) const {
  const std::size_t n = grid_.size();
  const double sign = plus ? 1.0 : -1.0;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  double mass = 0.0, first = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double cs = coord(s);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = values_[s * n + i];
      if (w == 0.0) continue;
      mass += w;
      first += w * (cs + sign * coord(i)) * inv_sqrt2;
    }
  }
  const double mu = first / mass;
  double second = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double cs = coord(s);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = values_[s * n + i];
      if (w == 0.0) continue;
      const double d = (cs + sign * coord(i)) * inv_sqrt2 - mu;
      second += w * d * d;
    }
  }
  return second / mass;
}

RotatedSections sections_rotated(const JointDistribution& dist) {
  const Grid1D& grid = dist.grid();
  const std::size_t n = grid.size();
  const auto& p = dist.values();
  const double first = dist.coord(0);
  const double step = dist.domain() == Domain::Position ? grid.dx() : grid.dq();
  const double inv_step = 1.0 / step;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

  auto interp = [&](double a_s, double a_i) -> double {
    const double u = (a_s - first) * inv_step;
    const double v = (a_i - first) * inv_step;
    const double fu = std::floor(u);
    const double fv = std::floor(v);
    const long ju = static_cast<long>(fu);
    const long jv = static_cast<long>(fv);
    if (ju < 0 || jv < 0 || ju + 1 >= static_cast<long>(n) ||
        jv + 1 >= static_cast<long>(n)) {
      return 0.0;
    }
    const double tu = u - fu;
    const double tv = v - fv;
    const std::size_t s0 = static_cast<std::size_t>(ju);
    const std::size_t i0 = static_cast<std::size_t>(jv);
    const double p00 = p[s0 * n + i0];
    const double p01 = p[s0 * n + i0 + 1];
    const double p10 = p[(s0 + 1) * n + i0];
    const double p11 = p[(s0 + 1) * n + i0 + 1];
    return (1.0 - tu) * ((1.0 - tv) * p00 + tv * p01) +
           tu * ((1.0 - tv) * p10 + tv * p11);
  };

  RotatedSections out;
  out.axis.resize(n);
  out.plus.assign(n, 0.0);
  out.minus.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) out.axis[j] = dist.coord(j);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = out.axis[i];
    double sum_plus = 0.0, sum_minus = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double b = out.axis[j];
      // a_+ = a, a_- = b integrated out, and vice versa.
      sum_plus += interp((a + b) * inv_sqrt2, (a - b) * inv_sqrt2);
      sum_minus += interp((b + a) * inv_sqrt2, (b - a) * inv_sqrt2);
    }
    out.plus[i] = sum_plus * step;
    out.minus[i] = sum_minus * step;
  }
  return out;
}

std::vector<std::complex<double>> joint_momentum_amplitude(
    const Field1D& pump_field, const PhaseMatching& pm) {
  if (pump_field.domain() != Domain::Position) {
    throw std::invalid_argument(
        "joint_momentum_amplitude: pump field must be position-domain");
  }
  pm.validate();
  const Grid1D& grid = pump_field.grid();
  check_paraxial_regime(grid, pm);
  const std::size_t n = grid.size();

  FftEngine1D engine(n);
  auto angular = engine.to_frequency(grid, pump_field.values());
  std::vector<double> ang_int(n);
  for (std::size_t k = 0; k < n; ++k) ang_int[k] = std::norm(angular[k]);
  check_angular_support(ang_int, "joint_momentum_amplitude");

  const auto chi = chi_by_difference(grid, pm);
  std::vector<std::complex<double>> phi(n * n);
  const long half = static_cast<long>(n / 2);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const long sum_idx = static_cast<long>(s + i) - half;
      const std::complex<double> e =
          (sum_idx >= 0 && sum_idx < static_cast<long>(n))
              ? angular[static_cast<std::size_t>(sum_idx)]
              : 0.0;
      phi[s * n + i] = e * chi[s + n - 1 - i];
    }
  }
  return phi;
}

namespace {

// Mean of |E_n(q_s+q_i) chi(q_-)|^2 over an ensemble; the momentum-space
// factorization makes only the 1D mean angular intensity enter.
JointDistribution momentum_from_ensemble(const EnsembleParams& ep,
                                         const PhaseMatching& pm,
                                         const Grid1D& grid) {
  const std::size_t n = grid.size();
  const std::size_t N = ep.screens.n_realizations;
  FftEngine1D engine(n);
  std::vector<double> mean_ang(n, 0.0);
  for (std::size_t r = 0; r < N; ++r) {
    const auto field = ensemble_field(grid, ep.screens, ep.k_p, r);
    const auto angular = engine.to_frequency(grid, field.values());
    for (std::size_t k = 0; k < n; ++k) mean_ang[k] += std::norm(angular[k]);
  }
  const double inv = 1.0 / static_cast<double>(N);
  for (auto& v : mean_ang) v *= inv;
  check_angular_support(mean_ang, "joint_momentum_distribution");

  const auto chi = chi_by_difference(grid, pm);
  std::vector<double> p(n * n);
  const long half = static_cast<long>(n / 2);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const long sum_idx = static_cast<long>(s + i) - half;
      const double se = (sum_idx >= 0 && sum_idx < static_cast<long>(n))
                            ? mean_ang[static_cast<std::size_t>(sum_idx)]
                            : 0.0;
      const double c = chi[s + n - 1 - i];
      p[s * n + i] = se * c * c;
    }
  }
  return JointDistribution(grid, std::move(p), Domain::Frequency);
}

}  // namespace

JointDistribution joint_momentum_distribution(const PumpSpec& spec,
                                              const PhaseMatching& pm,
                                              const Grid1D& grid) {
  spec.validate();
  pm.validate();
  check_paraxial_regime(grid, pm);
  const std::size_t n = grid.size();

  if (const auto* g = std::get_if<GaussianSchell>(&spec.model)) {
    if (std::isfinite(g->l_c)) {
      // Analytic Schell model: S(q_s + q_i) chi^2(q_-) with S the angular
      // intensity of the analytic CSD, sampled exactly on the sum grid.
      const auto spectrum = angular_intensity(analytic_csd(grid, *g, spec.k_p));
      check_angular_support(spectrum.values, "joint_momentum_distribution");
      const auto chi = chi_by_difference(grid, pm);
      std::vector<double> p(n * n);
      const std::size_t n2 = spectrum.values.size();
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
          // q_s + q_i = (s + i - n) dq lives at fine-grid index 2(s+i) - n.
          const long lf = 2 * static_cast<long>(s + i) - static_cast<long>(n);
          const double se = (lf >= 0 && lf < static_cast<long>(n2))
                                ? spectrum.values[static_cast<std::size_t>(lf)]
                                : 0.0;
          const double c = chi[s + n - 1 - i];
          p[s * n + i] = se * c * c;
        }
      }
      return JointDistribution(grid, std::move(p), Domain::Frequency);
    }
    // Infinite coherence length: defer to the coherent path below.
    PumpSpec coherent{CoherentGaussian{g->w, g->R}, spec.k_p};
    return joint_momentum_distribution(coherent, pm, grid);
  }

  if (const auto* e = std::get_if<PhaseScreenEnsemble>(&spec.model);
      e != nullptr && e->phi_0 > 0.0) {
    return momentum_from_ensemble(ensemble_params_for(spec, 1), pm, grid);
  }

  // Coherent pump (or a phi_0 = 0 ensemble, which is the same field for
  // every realization): single |Phi|^2.
  const auto field =
      coherent_field(grid, spec.waist(), spec.curvature(), spec.k_p);
  const auto phi = joint_momentum_amplitude(field, pm);
  std::vector<double> p(n * n);
  for (std::size_t idx = 0; idx < p.size(); ++idx) p[idx] = std::norm(phi[idx]);
  return JointDistribution(grid, std::move(p), Domain::Frequency);
}

JointDistribution joint_position_distribution(const PumpSpec& spec,
                                              const PhaseMatching& pm,
                                              const Grid1D& grid,
                                              std::size_t gsm_realizations) {
  spec.validate();
  pm.validate();
  check_paraxial_regime(grid, pm);
  const std::size_t n = grid.size();
  const EnsembleParams ep = ensemble_params_for(spec, gsm_realizations);
  const std::size_t N = ep.screens.n_realizations;
  const auto chi = chi_by_difference(grid, pm);
  const long half = static_cast<long>(n / 2);

  const std::size_t blocks = std::min<std::size_t>(kReductionBlocks, N);
  std::vector<std::vector<double>> partials(blocks);
  std::vector<std::exception_ptr> failures(blocks);
  std::vector<std::thread> workers;
  workers.reserve(blocks);

  for (std::size_t b = 0; b < blocks; ++b) {
    workers.emplace_back([&, b]() {
      try {
        const std::size_t lo = b * N / blocks;
        const std::size_t hi = (b + 1) * N / blocks;
        auto& acc = partials[b];
        acc.assign(n * n, 0.0);
        FftEngine1D engine1(n);
        FftEngine2D engine2(n);
        std::vector<std::complex<double>> phi(n * n);
        for (std::size_t r = lo; r < hi; ++r) {
          const auto field = ensemble_field(grid, ep.screens, ep.k_p, r);
          const auto angular = engine1.to_frequency(grid, field.values());
          std::vector<double> ang_int(n);
          for (std::size_t k = 0; k < n; ++k) ang_int[k] = std::norm(angular[k]);
          check_angular_support(ang_int, "joint_position_distribution");
          for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
              const long sum_idx = static_cast<long>(s + i) - half;
              const std::complex<double> e =
                  (sum_idx >= 0 && sum_idx < static_cast<long>(n))
                      ? angular[static_cast<std::size_t>(sum_idx)]
                      : 0.0;
              phi[s * n + i] = e * chi[s + n - 1 - i];
            }
          }
          engine2.to_position_inplace(grid, phi);
          for (std::size_t idx = 0; idx < acc.size(); ++idx) {
            acc[idx] += std::norm(phi[idx]);
          }
        }
      } catch (...) {
        failures[b] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::vector<double> p(n * n, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto& acc = partials[b];
    for (std::size_t idx = 0; idx < p.size(); ++idx) p[idx] += acc[idx];
  }
  const double inv = 1.0 / static_cast<double>(N);
  for (auto& v : p) v *= inv;
  return JointDistribution(grid, std::move(p), Domain::Position);
}

}  // namespace spdc
