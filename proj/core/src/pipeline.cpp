#include "spdc/pipeline.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "spdc/analysis.hpp"
#include "spdc/errors.hpp"
#include "spdc/moments.hpp"
#include "spdc/rng.hpp"

namespace spdc {

namespace {

constexpr std::size_t kAutoScanPoints = 25;
constexpr double kAutoScanSigmas = 3.5;
constexpr double kAutoPeakRate = 5.0;          // counts/s at the peak setting
constexpr double kAutoPeakSinglesRate = 300.0;  // counts/s

// Measured width (slit broadening included) of the rotated section the scan
// will sample, from the noiseless distribution.
double measured_sigma(const JointDistribution& dist, bool plus_section,
                      double box_width_per_arm) {
  const auto sections = sections_rotated(dist);
  const auto& sec = plus_section ? sections.plus : sections.minus;
  const double var = variance_of(sections.axis, sec);
  // Two independent top-hat windows of width b project onto the rotated axis
  // with combined variance b^2/12.
  return std::sqrt(var + box_width_per_arm * box_width_per_arm / 12.0);
}

}  // namespace

double rotated_coordinate(const CoincidenceRecord& rec, ScanMode mode) {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  return mode == ScanMode::Diagonal ? (rec.coord_s + rec.coord_i) * inv_sqrt2
                                    : (rec.coord_s - rec.coord_i) * inv_sqrt2;
}

std::vector<FitPoint> fit_points(const std::vector<CoincidenceRecord>& records,
                                 ScanMode mode) {
  std::vector<FitPoint> pts;
  pts.reserve(records.size());
  for (const auto& r : records) {
    pts.push_back(FitPoint{rotated_coordinate(r, mode),
                           static_cast<double>(r.coincidences), r.dwell_time});
  }
  return pts;
}

std::pair<JointDistribution, JointDistribution> build_distributions(
    const RunConfig& config) {
  config.validate();
  const PumpSpec spec = config.pump_spec();
  const PhaseMatching pm = config.phase_matching();
  const Grid1D grid = config.make_grid();
  auto momentum = joint_momentum_distribution(spec, pm, grid);
  auto position =
      joint_position_distribution(spec, pm, grid, config.pump.n_realizations);
  return {std::move(momentum), std::move(position)};
}

Measurement run_measurements(const RunConfig& config) {
  Measurement m;
  auto [momentum, position] = build_distributions(config);

  const Imaging4f imaging = config.imaging_system();
  const FourierLens fourier = config.fourier_system();
  const double magnification = imaging.magnification();
  const double k_det_s = 2.0 * std::numbers::pi / config.crystal.lambda_s;
  const double k_det_i = 2.0 * std::numbers::pi / config.crystal.lambda_i;

  // Slit windows mapped to the measured coordinates.
  const double box_x = config.scan.slit_width / magnification;
  const double box_q_s = config.scan.slit_width * k_det_s / fourier.f3;
  const double box_q_i = config.scan.slit_width * k_det_i / fourier.f3;

  // Scan geometry: explicit range/step if configured, otherwise +-3.5 sigma
  // of the slit-broadened section with 25 points.
  // Anti-diagonal position scan: x_- = sqrt(2) d / M.
  if (config.scan.range > 0.0) {
    m.range_position = config.scan.range;
    m.range_momentum = config.scan.range;
    m.step_position = config.scan.step > 0.0
                          ? config.scan.step
                          : 2.0 * config.scan.range /
                                static_cast<double>(kAutoScanPoints - 1);
    m.step_momentum = m.step_position;
  } else {
    const double sx = measured_sigma(position, false, box_x);
    m.range_position =
        kAutoScanSigmas * sx * magnification / std::numbers::sqrt2;
    m.step_position =
        2.0 * m.range_position / static_cast<double>(kAutoScanPoints - 1);
    const double sq =
        measured_sigma(momentum, true, 0.5 * (box_q_s + box_q_i));
    // Diagonal momentum scan: q_+ = d (k_s + k_i) / (sqrt(2) f3).
    m.range_momentum = kAutoScanSigmas * sq * std::numbers::sqrt2 * fourier.f3 /
                       (k_det_s + k_det_i);
    m.step_momentum =
        2.0 * m.range_momentum / static_cast<double>(kAutoScanPoints - 1);
  }

  const auto schedule_pos =
      scan_schedule(ScanMode::AntiDiagonal, m.range_position, m.step_position);
  const auto schedule_mom =
      scan_schedule(ScanMode::Diagonal, m.range_momentum, m.step_momentum);

  // Rate constants: auto-calibrate so the peak scan setting expects ~5
  // coincidences/s and ~300 singles/s (detector efficiency is a free input).
  auto resolve_rate = [&](const JointDistribution& dist,
                          const OpticalSystem& sys,
                          const std::vector<std::pair<double, double>>& sched,
                          double configured, double target) {
    if (configured > 0.0) return configured;
    const double peak =
        peak_window_integral(dist, sys, config.scan.slit_width, sched);
    if (!(peak > 0.0)) {
      throw NumericError("run_measurements: scan window sees no density");
    }
    return target / peak;
  };
  m.rate_constant_position = resolve_rate(position, OpticalSystem{imaging},
                                          schedule_pos, config.scan.rate_constant,
                                          kAutoPeakRate);
  m.rate_constant_momentum = resolve_rate(momentum, OpticalSystem{fourier},
                                          schedule_mom, config.scan.rate_constant,
                                          kAutoPeakRate);
  auto resolve_singles = [&](const JointDistribution& dist,
                             const OpticalSystem& sys,
                             const std::vector<std::pair<double, double>>& sched,
                             double configured) {
    if (configured > 0.0) return configured;
    double peak = 0.0;
    for (const auto& [d_s, d_i] : sched) {
      peak = std::max(peak, expected_singles_rate(dist, sys, d_s, 0,
                                                  config.scan.slit_width, 1.0));
    }
    if (!(peak > 0.0)) {
      throw NumericError("run_measurements: singles window sees no density");
    }
    return kAutoPeakSinglesRate / peak;
  };
  m.singles_constant_position =
      resolve_singles(position, OpticalSystem{imaging}, schedule_pos,
                      config.scan.singles_rate_constant);
  m.singles_constant_momentum =
      resolve_singles(momentum, OpticalSystem{fourier}, schedule_mom,
                      config.scan.singles_rate_constant);

  const std::size_t repeats = config.scan.repeats;
  m.scans_position.reserve(repeats);
  m.scans_momentum.reserve(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    SlitScanConfig sc;
    sc.slit_width = config.scan.slit_width;
    sc.dwell_time = config.scan.dwell;
    sc.mode = ScanMode::AntiDiagonal;
    sc.positions = schedule_pos;
    sc.rate_constant = m.rate_constant_position;
    sc.singles_rate_constant = m.singles_constant_position;
    sc.seed = derive_seed(config.pump.seed, r, 1);
    m.scans_position.push_back(
        simulate_scan(position, OpticalSystem{imaging}, sc));

    sc.mode = ScanMode::Diagonal;
    sc.positions = schedule_mom;
    sc.rate_constant = m.rate_constant_momentum;
    sc.singles_rate_constant = m.singles_constant_momentum;
    sc.seed = derive_seed(config.pump.seed, r, 2);
    m.scans_momentum.push_back(
        simulate_scan(momentum, OpticalSystem{fourier}, sc));

    const auto fx = fit_gaussian(fit_points(m.scans_position.back(),
                                            ScanMode::AntiDiagonal));
    const auto fq =
        fit_gaussian(fit_points(m.scans_momentum.back(), ScanMode::Diagonal));
    if (!fx.converged || !fq.converged) {
      throw NumericError("run_measurements: Gaussian fit did not converge on "
                         "repeat " + std::to_string(r));
    }
    m.fits_x_minus.push_back(fx);
    m.fits_q_plus.push_back(fq);
    m.products.push_back(fx.variance() * fq.variance());
  }

  double sum_vx = 0.0, sum_vq = 0.0;
  for (std::size_t r = 0; r < repeats; ++r) {
    sum_vx += m.fits_x_minus[r].variance();
    sum_vq += m.fits_q_plus[r].variance();
  }
  m.var_x_minus = sum_vx / static_cast<double>(repeats);
  m.var_p_plus = sum_vq / static_cast<double>(repeats);
  // reported product is the product of the mean variances; the error bar is
  // the spread of the per-repeat products
  const double product = m.var_x_minus * m.var_p_plus;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (repeats >= 2) {
    std::vector<double> vx, vq;
    for (std::size_t r = 0; r < repeats; ++r) {
      vx.push_back(m.fits_x_minus[r].variance());
      vq.push_back(m.fits_q_plus[r].variance());
    }
    m.err_var_x = bootstrap_error(vx);
    m.err_var_p = bootstrap_error(vq);
    m.report.product_error = bootstrap_error(m.products);
  } else {
    m.err_var_x = nan;
    m.err_var_p = nan;
    m.report.product_error = nan;
  }

  m.report.var_x_minus = m.var_x_minus;
  m.report.var_p_plus = m.var_p_plus;
  m.report.product = product;
  m.report.significance_k = config.report.significance_k;
  m.report.decide();

  m.momentum = std::move(momentum);
  m.position = std::move(position);
  return m;
}

}  // namespace spdc
