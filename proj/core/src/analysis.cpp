#include "spdc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spdc/errors.hpp"
#include "spdc/pipeline.hpp"

namespace spdc {

std::string to_string(Verdict v) {
  return v == Verdict::Entangled ? "entangled" : "not_demonstrated";
}

void EntanglementReport::decide() {
  const double margin = std::isnan(product_error)
                            ? 0.0
                            : significance_k * product_error;
  verdict = (product + margin < bound) ? Verdict::Entangled
                                       : Verdict::NotDemonstrated;
}

EntanglementReport epr_product(const GaussianFit& fit_x_minus,
                               const GaussianFit& fit_p_plus, double k) {
  if (!fit_x_minus.converged || !fit_p_plus.converged) {
    throw NumericError("epr_product: unconverged fit");
  }
  EntanglementReport rep;
  rep.var_x_minus = fit_x_minus.variance();
  rep.var_p_plus = fit_p_plus.variance();
  rep.product = rep.var_x_minus * rep.var_p_plus;
  // First-order propagation from the fit covariances.
  const double rx = fit_x_minus.variance_error() / rep.var_x_minus;
  const double rq = fit_p_plus.variance_error() / rep.var_p_plus;
  rep.product_error = rep.product * std::sqrt(rx * rx + rq * rq);
  rep.significance_k = k;
  rep.decide();
  return rep;
}

double aspect_ratio(const JointDistribution& dist) {
  const auto sections = sections_rotated(dist);
  const auto fp = fit_profile(sections.axis, sections.plus);
  const auto fm = fit_profile(sections.axis, sections.minus);
  if (!fp.converged || !fm.converged) {
    throw NumericError("aspect_ratio: section fit did not converge");
  }
  return dist.domain() == Domain::Position ? fm.sigma / fp.sigma
                                           : fp.sigma / fm.sigma;
}

double bootstrap_error(std::span<const double> values) {
  if (values.size() < 2) {
    throw std::invalid_argument("bootstrap_error: need at least 2 runs");
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

SweepResult coherence_sweep(const RunConfig& base,
                            std::span<const double> phi_0_list) {
  if (phi_0_list.empty()) {
    throw std::invalid_argument("coherence_sweep: empty phi_0 list");
  }
  SweepResult result;
  std::size_t failures = 0;
  for (double phi0 : phi_0_list) {
    if (!(phi0 >= 0.0)) {
      throw std::invalid_argument("coherence_sweep: phi_0 must be >= 0");
    }
    SweepRow row;
    row.phi_0 = phi0;
    row.w_over_lc =
        phi0 == 0.0 ? 0.0 : base.pump.w / (base.pump.delta_phi / phi0);
    RunConfig config = base;
    if (phi0 == 0.0) {
      config.pump.model = "coherent";
    } else {
      config.pump.model = "phase_screen_ensemble";
      config.pump.phi_0 = phi0;
    }
    try {
      const Measurement meas = run_measurements(config);
      row.var_x_minus = meas.var_x_minus;
      row.var_p_plus = meas.var_p_plus;
      row.product = meas.report.product;
      row.err_var_x = meas.err_var_x;
      row.err_var_p = meas.err_var_p;
      row.err_product = meas.report.product_error;
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
      ++failures;
    }
    result.rows.push_back(std::move(row));
  }
  if (2 * failures > phi_0_list.size()) {
    throw NumericError("coherence_sweep: more than half of the rows failed");
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const SweepRow& a, const SweepRow& b) {
              return a.w_over_lc < b.w_over_lc;
            });

  // Weighted linear regression var_p_plus = intercept + slope * (w/l_c)^2.
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& row : result.rows) {
    if (!row.ok) continue;
    const double x = row.w_over_lc * row.w_over_lc;
    const double err = row.err_var_p;
    const double w = (std::isfinite(err) && err > 0.0) ? 1.0 / (err * err) : 1.0;
    sw += w;
    sx += w * x;
    sy += w * row.var_p_plus;
    sxx += w * x * x;
    sxy += w * x * row.var_p_plus;
  }
  const double denom = sw * sxx - sx * sx;
  if (denom > 0.0) {
    result.slope = (sw * sxy - sx * sy) / denom;
    result.intercept = (sxx * sy - sx * sxy) / denom;
    result.slope_error = std::sqrt(sw / denom);
  }

  // Crossing of the separable bound, linear interpolation between the
  // bracketing rows; the error interval comes from crossing product +- err.
  const double bound = 0.25;
  for (std::size_t i = 0; i + 1 < result.rows.size(); ++i) {
    const auto& a = result.rows[i];
    const auto& b = result.rows[i + 1];
    if (!a.ok || !b.ok) continue;
    if (a.product < bound && b.product >= bound) {
      auto interp = [&](double pa, double pb) {
        const double t = (bound - pa) / (pb - pa);
        return a.w_over_lc + t * (b.w_over_lc - a.w_over_lc);
      };
      result.crossing_found = true;
      result.crossing_w_over_lc = interp(a.product, b.product);
      const double ea = std::isfinite(a.err_product) ? a.err_product : 0.0;
      const double eb = std::isfinite(b.err_product) ? b.err_product : 0.0;
      if (ea > 0.0 || eb > 0.0) {
        // Shift the product curve by the local error bars in both directions;
        // clamp to the bracketing interval.
        const double lo_a = a.product - ea, lo_b = b.product - eb;
        const double hi_a = a.product + ea, hi_b = b.product + eb;
        double x_lo = result.crossing_w_over_lc;
        double x_hi = result.crossing_w_over_lc;
        if (hi_a < bound && hi_b >= bound) {
          const double t = (bound - hi_a) / (hi_b - hi_a);
          x_lo = a.w_over_lc + t * (b.w_over_lc - a.w_over_lc);
        } else if (hi_a >= bound) {
          x_lo = a.w_over_lc;
        }
        if (lo_a < bound && lo_b >= bound) {
          const double t = (bound - lo_a) / (lo_b - lo_a);
          x_hi = a.w_over_lc + t * (b.w_over_lc - a.w_over_lc);
        } else if (lo_b < bound) {
          x_hi = b.w_over_lc;
        }
        result.crossing_error =
            0.5 * std::abs(x_hi - x_lo);
      }
      break;
    }
  }
  return result;
}

}  // namespace spdc
