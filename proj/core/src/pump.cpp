#include "spdc/pump.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "spdc/errors.hpp"
#include "spdc/fft.hpp"
#include "spdc/moments.hpp"
#include "spdc/rng.hpp"

namespace spdc {

namespace {

void require_positive(double v, const char* name, bool allow_infinite = false) {
  if (allow_infinite && std::isinf(v) && v > 0.0) return;
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("pump: ") + name +
                                " must be positive" +
                                (allow_infinite ? " or infinite" : ""));
  }
}

}  // namespace

void PumpSpec::validate() const {
  require_positive(k_p, "k_p");
  if (const auto* c = std::get_if<CoherentGaussian>(&model)) {
    require_positive(c->w, "w");
    require_positive(c->R, "R", true);
  } else if (const auto* g = std::get_if<GaussianSchell>(&model)) {
    require_positive(g->w, "w");
    require_positive(g->R, "R", true);
    require_positive(g->l_c, "l_c", true);
  } else {
    const auto& e = std::get<PhaseScreenEnsemble>(model);
    require_positive(e.w, "w");
    require_positive(e.R, "R", true);
    require_positive(e.delta_phi, "delta_phi");
    if (!(e.phi_0 >= 0.0) || !std::isfinite(e.phi_0)) {
      throw std::invalid_argument("pump: phi_0 must be finite and >= 0");
    }
    if (e.n_realizations < 1) {
      throw std::invalid_argument("pump: n_realizations must be >= 1");
    }
  }
}

double PumpSpec::waist() const {
  return std::visit([](const auto& m) { return m.w; }, model);
}

double PumpSpec::curvature() const {
  return std::visit([](const auto& m) { return m.R; }, model);
}

CrossSpectralDensity::CrossSpectralDensity(Grid1D grid,
                                           std::vector<std::complex<double>> w)
    : grid_(grid), w_(std::move(w)) {
  const std::size_t n = grid_.size();
  if (w_.size() != n * n) {
    throw std::invalid_argument("CrossSpectralDensity: matrix size mismatch");
  }
  double max_mag = 0.0;
  for (const auto& v : w_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("CrossSpectralDensity: non-finite entry");
    }
    max_mag = std::max(max_mag, std::abs(v));
  }
  if (max_mag == 0.0) {
    throw std::invalid_argument("CrossSpectralDensity: all-zero matrix");
  }
  const double herm_tol = 1e-10 * max_mag;
  double diag_peak = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    diag_peak = std::max(diag_peak, w_[j * n + j].real());
  }
  for (std::size_t j1 = 0; j1 < n; ++j1) {
    const auto d = w_[j1 * n + j1];
    if (std::abs(d.imag()) > herm_tol || d.real() < -herm_tol) {
      throw std::invalid_argument(
          "CrossSpectralDensity: diagonal must be real and nonnegative");
    }
    for (std::size_t j2 = j1 + 1; j2 < n; ++j2) {
      if (std::abs(w_[j1 * n + j2] - std::conj(w_[j2 * n + j1])) > herm_tol) {
        throw std::invalid_argument("CrossSpectralDensity: not Hermitian");
      }
    }
  }
  // |W(x1,x2)| <= sqrt(W(x1,x1) W(x2,x2)) wherever the diagonal is resolved.
  const double diag_floor = 1e-6 * diag_peak;
  for (std::size_t j1 = 0; j1 < n; ++j1) {
    const double d1 = std::max(w_[j1 * n + j1].real(), 0.0);
    if (d1 < diag_floor) continue;
    for (std::size_t j2 = 0; j2 < n; ++j2) {
      const double d2 = std::max(w_[j2 * n + j2].real(), 0.0);
      if (d2 < diag_floor) continue;
      if (std::abs(w_[j1 * n + j2]) > (1.0 + 1e-9) * std::sqrt(d1 * d2)) {
        throw std::invalid_argument(
            "CrossSpectralDensity: degree of coherence exceeds 1");
      }
    }
  }
}

std::vector<double> CrossSpectralDensity::diagonal() const {
  const std::size_t n = grid_.size();
  std::vector<double> d(n);
  for (std::size_t j = 0; j < n; ++j) d[j] = std::max(w_[j * n + j].real(), 0.0);
  return d;
}

std::vector<double> AngularSpectrum::coords() const {
  std::vector<double> c(values.size());
  for (std::size_t l = 0; l < values.size(); ++l) c[l] = coord(l);
  return c;
}

double AngularSpectrum::variance() const {
  return variance_of(coords(), values);
}

double coherence_length_of(double delta_phi, double phi_0) {
  if (!(delta_phi > 0.0)) {
    throw std::invalid_argument("coherence_length_of: delta_phi must be > 0");
  }
  if (!(phi_0 >= 0.0)) {
    throw std::invalid_argument("coherence_length_of: phi_0 must be >= 0");
  }
  if (phi_0 == 0.0) return kInfinite;
  return delta_phi / phi_0;
}

double gsm_delta_p_plus_sq(double w, double R, double l_c, double k_p) {
  require_positive(w, "w");
  require_positive(R, "R", true);
  require_positive(l_c, "l_c", true);
  require_positive(k_p, "k_p");
  double v = 1.0 / (8.0 * w * w);
  if (std::isfinite(R)) v += w * w * k_p * k_p / (2.0 * R * R);
  if (std::isfinite(l_c)) v += 1.0 / (2.0 * l_c * l_c);
  return v;
}

CrossSpectralDensity analytic_csd(const Grid1D& grid, const GaussianSchell& gs,
                                  double k_p) {
  require_positive(gs.w, "w");
  require_positive(gs.R, "R", true);
  require_positive(gs.l_c, "l_c", true);
  require_positive(k_p, "k_p");
  if (std::isfinite(gs.l_c) && grid.dx() > gs.l_c / 4.0) {
    throw ConfigError(
        "analytic_csd: coherence length under-resolved (need >= 4 grid points "
        "per l_c, dx = " + std::to_string(grid.dx()) +
        " m, l_c = " + std::to_string(gs.l_c) + " m); use a finer grid");
  }
  if (grid.dx() > gs.w / 4.0) {
    throw ConfigError("analytic_csd: beam waist under-resolved (need >= 4 grid "
                      "points per w)");
  }
  const std::size_t n = grid.size();
  std::vector<std::complex<double>> w(n * n);
  const double inv4w2 = 1.0 / (4.0 * gs.w * gs.w);
  const double inv2lc2 = std::isfinite(gs.l_c) ? 1.0 / (2.0 * gs.l_c * gs.l_c) : 0.0;
  const double curv = std::isfinite(gs.R) ? k_p / (2.0 * gs.R) : 0.0;
  for (std::size_t j1 = 0; j1 < n; ++j1) {
    const double x1 = grid.x(j1);
    for (std::size_t j2 = 0; j2 < n; ++j2) {
      const double x2 = grid.x(j2);
      const double d = x1 - x2;
      const double mag = std::exp(-(x1 * x1 + x2 * x2) * inv4w2 - d * d * inv2lc2);
      const double phase = -curv * (x1 * x1 - x2 * x2);
      w[j1 * n + j2] = std::polar(mag, phase);
    }
  }
  return CrossSpectralDensity(grid, std::move(w));
}

AngularSpectrum angular_intensity(const CrossSpectralDensity& csd) {
  const Grid1D& grid = csd.grid();
  const std::size_t n = grid.size();
  const std::size_t n2 = 2 * n;
  // T(v) = sum_x W(x, x - v) dx on the lag grid v = m dx, m in (-n, n).
  std::vector<std::complex<double>> lag(n2, 0.0);
  const auto& w = csd.values();
  for (long m = -static_cast<long>(n) + 1; m < static_cast<long>(n); ++m) {
    std::complex<double> sum = 0.0;
    const long lo = std::max<long>(0, m);
    const long hi = std::min<long>(n, static_cast<long>(n) + m);
    for (long j1 = lo; j1 < hi; ++j1) {
      sum += w[static_cast<std::size_t>(j1) * n +
               static_cast<std::size_t>(j1 - m)];
    }
    lag[static_cast<std::size_t>(m + static_cast<long>(n))] = sum * grid.dx();
  }
  // S(q) = sum_v T(v) exp(-i q v) dx via the forward physical transform on a
  // 2n grid of the same spacing (conjugate spacing dq/2).
  Grid1D lag_grid(n2, grid.dx());
  FftEngine1D engine(n2);
  auto spectrum = engine.to_frequency(lag_grid, lag);
  AngularSpectrum out;
  out.dq = lag_grid.dq();
  out.values.resize(n2);
  for (std::size_t l = 0; l < n2; ++l) {
    out.values[l] = std::max(spectrum[l].real(), 0.0);
  }
  return out;
}

std::vector<double> make_phase_screen(const Grid1D& grid, double delta_phi,
                                      double phi_0, std::uint64_t seed,
                                      std::uint64_t index) {
  require_positive(delta_phi, "delta_phi");
  if (!(phi_0 >= 0.0) || !std::isfinite(phi_0)) {
    throw std::invalid_argument("make_phase_screen: phi_0 must be >= 0");
  }
  if (grid.dx() > delta_phi / 4.0) {
    throw ConfigError(
        "make_phase_screen: screen correlation width under-resolved (need >= 4 "
        "grid points per delta_phi); use a finer grid");
  }
  const std::size_t n = grid.size();
  std::vector<double> phi(n, 0.0);
  if (phi_0 == 0.0) return phi;

  // Spectral synthesis: g(x) = sqrt(2) Re sum_k zeta_k sqrt(S_g(q_k) dq/2pi)
  // exp(i q_k x) with S_g(q) = sqrt(2 pi) delta_phi exp(-q^2 delta_phi^2 / 2),
  // giving <g(x1) g(x2)> = exp(-(x1-x2)^2/(2 delta_phi^2)) on the grid.
  RandomStream rs(derive_seed(seed, index));
  const double sqrt2pi = std::sqrt(2.0 * std::numbers::pi);
  std::vector<std::complex<double>> coeff(n);
  const double twopi = 2.0 * std::numbers::pi;
  for (std::size_t k = 0; k < n; ++k) {
    const double q = grid.q(k);
    const double spectral = sqrt2pi * delta_phi * std::exp(-0.5 * q * q * delta_phi * delta_phi);
    const double amp = std::sqrt(spectral * twopi / grid.dq()) / std::sqrt(2.0);
    coeff[k] = std::complex<double>(rs.normal() * amp, rs.normal() * amp);
  }
  FftEngine1D engine(n);
  auto h = engine.to_position(grid, coeff);
  const double scale = phi_0 * std::sqrt(2.0);
  for (std::size_t j = 0; j < n; ++j) phi[j] = scale * h[j].real();
  return phi;
}

Field1D coherent_field(const Grid1D& grid, double w, double R, double k_p) {
  require_positive(w, "w");
  require_positive(R, "R", true);
  const std::size_t n = grid.size();
  const double inv4w2 = 1.0 / (4.0 * w * w);
  const double curv = std::isfinite(R) ? k_p / (2.0 * R) : 0.0;
  std::vector<std::complex<double>> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.x(j);
    e[j] = std::polar(std::exp(-x * x * inv4w2), -curv * x * x);
  }
  return Field1D(grid, std::move(e), Domain::Position);
}

Field1D ensemble_field(const Grid1D& grid, const PhaseScreenEnsemble& spec,
                       double k_p, std::uint64_t index) {
  auto base = coherent_field(grid, spec.w, spec.R, k_p);
  if (spec.phi_0 == 0.0) return base;
  auto phi = make_phase_screen(grid, spec.delta_phi, spec.phi_0, spec.seed, index);
  std::vector<std::complex<double>> e(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    e[j] = base.values()[j] * std::polar(1.0, phi[j]);
  }
  return Field1D(grid, std::move(e), Domain::Position);
}

CrossSpectralDensity csd_from_ensemble(const std::vector<Field1D>& fields) {
  if (fields.size() < 2) {
    throw std::invalid_argument("csd_from_ensemble: need at least 2 fields");
  }
  const Grid1D& grid = fields.front().grid();
  for (const auto& f : fields) {
    if (!(f.grid() == grid) || f.domain() != Domain::Position) {
      throw std::invalid_argument(
          "csd_from_ensemble: fields must share one position grid");
    }
  }
  const std::size_t n = grid.size();
  std::vector<std::complex<double>> w(n * n, 0.0);
  for (const auto& f : fields) {
    const auto& e = f.values();
    for (std::size_t j1 = 0; j1 < n; ++j1) {
      const auto e1 = e[j1];
      for (std::size_t j2 = 0; j2 < n; ++j2) {
        w[j1 * n + j2] += e1 * std::conj(e[j2]);
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(fields.size());
  for (auto& v : w) v *= inv;
  // Symmetrize exactly; accumulation order makes the two triangles differ by
  // rounding only.
  for (std::size_t j1 = 0; j1 < n; ++j1) {
    for (std::size_t j2 = j1 + 1; j2 < n; ++j2) {
      const auto avg = 0.5 * (w[j1 * n + j2] + std::conj(w[j2 * n + j1]));
      w[j1 * n + j2] = avg;
      w[j2 * n + j1] = std::conj(avg);
    }
    w[j1 * n + j1] = std::complex<double>(w[j1 * n + j1].real(), 0.0);
  }
  return CrossSpectralDensity(grid, std::move(w));
}

}  // namespace spdc
