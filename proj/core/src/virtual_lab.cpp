#include "spdc/virtual_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "spdc/errors.hpp"
#include "spdc/rng.hpp"

namespace spdc {

namespace {

double free_space_wavenumber(double lambda) {
  return 2.0 * std::numbers::pi / lambda;
}

// Overlap weights of a top-hat window [center - width/2, center + width/2]
// with the grid cells [coord - step/2, coord + step/2); the distribution is
// treated as piecewise constant per cell, consistent with its cell-sum mass.
struct Window {
  std::size_t first = 0;
  std::vector<double> weights;  // overlap length per cell [coordinate units]
};

Window window_weights(const JointDistribution& dist, double center,
                      double width) {
  const Grid1D& grid = dist.grid();
  const std::size_t n = grid.size();
  const double step = dist.domain() == Domain::Position ? grid.dx() : grid.dq();
  const double first_coord = dist.coord(0);
  const double lo = center - width / 2.0;
  const double hi = center + width / 2.0;
  if (lo < first_coord - step / 2.0 ||
      hi > dist.coord(n - 1) + step / 2.0) {
    throw NumericError("expected_rate: slit window outside the grid extent");
  }
  const long j_lo = std::max<long>(
      0, static_cast<long>(std::floor((lo - first_coord) / step + 0.5)));
  const long j_hi = std::min<long>(
      static_cast<long>(n) - 1,
      static_cast<long>(std::floor((hi - first_coord) / step + 0.5)));
  Window w;
  w.first = static_cast<std::size_t>(j_lo);
  w.weights.reserve(static_cast<std::size_t>(j_hi - j_lo + 1));
  for (long j = j_lo; j <= j_hi; ++j) {
    const double cell_lo = first_coord + (static_cast<double>(j) - 0.5) * step;
    const double cell_hi = cell_lo + step;
    const double overlap = std::min(hi, cell_hi) - std::max(lo, cell_lo);
    w.weights.push_back(std::max(overlap, 0.0));
  }
  return w;
}

// Width of the slit transmission window mapped into the measured coordinate.
double mapped_width(double slit_width, const OpticalSystem& system, int arm) {
  if (const auto* im = std::get_if<Imaging4f>(&system)) {
    return slit_width / im->magnification();
  }
  const auto& fl = std::get<FourierLens>(system);
  const double lambda = arm == 0 ? fl.lambda_s : fl.lambda_i;
  return slit_width * free_space_wavenumber(lambda) / fl.f3;
}

double window_integral(const JointDistribution& dist,
                       const OpticalSystem& system, double d_s, double d_i,
                       double slit_width) {
  const Window ws =
      window_weights(dist, map_slit(d_s, system, 0), mapped_width(slit_width, system, 0));
  const Window wi =
      window_weights(dist, map_slit(d_i, system, 1), mapped_width(slit_width, system, 1));
  const std::size_t n = dist.grid().size();
  const auto& p = dist.values();
  double sum = 0.0;
  for (std::size_t a = 0; a < ws.weights.size(); ++a) {
    const std::size_t s = ws.first + a;
    double row = 0.0;
    for (std::size_t b = 0; b < wi.weights.size(); ++b) {
      row += p[s * n + (wi.first + b)] * wi.weights[b];
    }
    sum += row * ws.weights[a];
  }
  // Normalize by the total mass in the same piecewise-constant convention.
  const double step = dist.domain() == Domain::Position ? dist.grid().dx()
                                                        : dist.grid().dq();
  double mass = 0.0;
  for (double v : p) mass += v;
  return sum / (mass * step * step);
}

}  // namespace

void validate(const OpticalSystem& system) {
  if (const auto* im = std::get_if<Imaging4f>(&system)) {
    if (!(im->f1 > 0.0) || !(im->f2 > 0.0)) {
      throw std::invalid_argument("Imaging4f: focal lengths must be positive");
    }
  } else {
    const auto& fl = std::get<FourierLens>(system);
    if (!(fl.f3 > 0.0) || !(fl.lambda_s > 0.0) || !(fl.lambda_i > 0.0)) {
      throw std::invalid_argument(
          "FourierLens: focal length and wavelengths must be positive");
    }
  }
}

Domain measured_domain(const OpticalSystem& system) {
  return std::holds_alternative<Imaging4f>(system) ? Domain::Position
                                                   : Domain::Frequency;
}

std::string to_string(ScanMode mode) {
  switch (mode) {
    case ScanMode::AntiDiagonal: return "anti_diagonal";
    case ScanMode::Diagonal: return "diagonal";
    case ScanMode::Raster: return "raster";
  }
  return "?";
}

ScanMode scan_mode_from_string(const std::string& s) {
  if (s == "anti_diagonal") return ScanMode::AntiDiagonal;
  if (s == "diagonal") return ScanMode::Diagonal;
  if (s == "raster") return ScanMode::Raster;
  throw std::invalid_argument("unknown scan mode: " + s);
}

void SlitScanConfig::validate() const {
  if (!(slit_width > 0.0)) {
    throw std::invalid_argument("SlitScanConfig: slit_width must be > 0");
  }
  if (!(dwell_time > 0.0)) {
    throw std::invalid_argument("SlitScanConfig: dwell_time must be > 0");
  }
  if (!(rate_constant >= 0.0) || !(singles_rate_constant >= 0.0)) {
    throw std::invalid_argument("SlitScanConfig: rate constants must be >= 0");
  }
  if (positions.empty()) {
    throw std::invalid_argument("SlitScanConfig: empty schedule");
  }
}

double map_slit_to_momentum(double d, double lambda_detected, double f3) {
  if (!(f3 > 0.0) || !(lambda_detected > 0.0)) {
    throw std::invalid_argument("map_slit_to_momentum: f3, lambda must be > 0");
  }
  return d * free_space_wavenumber(lambda_detected) / f3;
}

double map_slit_to_position(double d, const Imaging4f& system) {
  validate(OpticalSystem{system});
  return d / system.magnification();
}

double map_slit(double d, const OpticalSystem& system, int arm) {
  if (const auto* im = std::get_if<Imaging4f>(&system)) {
    return map_slit_to_position(d, *im);
  }
  const auto& fl = std::get<FourierLens>(system);
  return map_slit_to_momentum(d, arm == 0 ? fl.lambda_s : fl.lambda_i, fl.f3);
}

double expected_rate(const JointDistribution& dist, const OpticalSystem& system,
                     double d_s, double d_i, double slit_width,
                     double rate_constant) {
  validate(system);
  if (measured_domain(system) != dist.domain()) {
    throw std::invalid_argument(
        "expected_rate: optical system does not measure this domain");
  }
  if (!(slit_width > 0.0)) {
    throw std::invalid_argument("expected_rate: slit_width must be > 0");
  }
  return rate_constant * window_integral(dist, system, d_s, d_i, slit_width);
}

double expected_singles_rate(const JointDistribution& dist,
                             const OpticalSystem& system, double d, int arm,
                             double slit_width, double singles_rate_constant) {
  validate(system);
  const auto marginal = arm == 0 ? dist.marginal_signal() : dist.marginal_idler();
  const Window w =
      window_weights(dist, map_slit(d, system, arm), mapped_width(slit_width, system, arm));
  double sum = 0.0;
  for (std::size_t a = 0; a < w.weights.size(); ++a) {
    sum += marginal[w.first + a] * w.weights[a];
  }
  double mass = 0.0;
  for (double v : marginal) mass += v;
  const double step = dist.domain() == Domain::Position ? dist.grid().dx()
                                                        : dist.grid().dq();
  return singles_rate_constant * sum / (mass * step);
}

std::vector<CoincidenceRecord> simulate_scan(const JointDistribution& dist,
                                             const OpticalSystem& system,
                                             const SlitScanConfig& config) {
  config.validate();
  std::vector<CoincidenceRecord> records;
  records.reserve(config.positions.size());
  for (std::size_t idx = 0; idx < config.positions.size(); ++idx) {
    const auto [d_s, d_i] = config.positions[idx];
    const double rate = expected_rate(dist, system, d_s, d_i,
                                      config.slit_width, config.rate_constant);
    const double rate_s = expected_singles_rate(
        dist, system, d_s, 0, config.slit_width, config.singles_rate_constant);
    const double rate_i = expected_singles_rate(
        dist, system, d_i, 1, config.slit_width, config.singles_rate_constant);
    RandomStream rs(derive_seed(config.seed, idx));
    CoincidenceRecord rec;
    rec.d_s = d_s;
    rec.d_i = d_i;
    rec.coord_s = map_slit(d_s, system, 0);
    rec.coord_i = map_slit(d_i, system, 1);
    rec.dwell_time = config.dwell_time;
    rec.coincidences = rs.poisson(rate * config.dwell_time);
    rec.singles_s = rs.poisson(rate_s * config.dwell_time);
    rec.singles_i = rs.poisson(rate_i * config.dwell_time);
    records.push_back(rec);
  }
  return records;
}

std::vector<std::pair<double, double>> scan_schedule(ScanMode mode, double range,
                                                     double step) {
  return scan_schedule(mode, range, step, nullptr);
}

std::vector<std::pair<double, double>> scan_schedule(
    ScanMode mode, double range, double step,
    const std::function<bool(double, double)>& mask) {
  if (!(step > 0.0) || !(range >= 0.0)) {
    throw std::invalid_argument("scan_schedule: step must be > 0, range >= 0");
  }
  const long half = static_cast<long>(std::llround(range / step));
  std::vector<std::pair<double, double>> positions;
  if (mode == ScanMode::Raster) {
    for (long a = -half; a <= half; ++a) {
      for (long b = -half; b <= half; ++b) {
        const double d_s = static_cast<double>(a) * step;
        const double d_i = static_cast<double>(b) * step;
        if (!mask || mask(d_s, d_i)) positions.emplace_back(d_s, d_i);
      }
    }
  } else {
    for (long a = -half; a <= half; ++a) {
      const double d = static_cast<double>(a) * step;
      const double d_i = mode == ScanMode::Diagonal ? d : -d;
      if (!mask || mask(d, d_i)) positions.emplace_back(d, d_i);
    }
  }
  if (positions.empty()) {
    throw std::invalid_argument("scan_schedule: empty schedule");
  }
  return positions;
}

double peak_window_integral(const JointDistribution& dist,
                            const OpticalSystem& system, double slit_width,
                            const std::vector<std::pair<double, double>>& positions) {
  double peak = 0.0;
  for (const auto& [d_s, d_i] : positions) {
    peak = std::max(peak, window_integral(dist, system, d_s, d_i, slit_width));
  }
  return peak;
}

}  // namespace spdc
