#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace spdc {

enum class Verdict { Entangled, NotDemonstrated };

std::string to_string(Verdict v);

/// Separability check on the measured uncertainty product. Variances are in
/// m^2 and hbar^2 m^-2, so the product is in units of hbar^2 and the
/// separable bound is 1/4.
struct EntanglementReport {
  double var_x_minus = 0.0;
  double var_p_plus = 0.0;
  double product = 0.0;
  double product_error = std::numeric_limits<double>::quiet_NaN();
  double bound = 0.25;
  double significance_k = 0.0;
  Verdict verdict = Verdict::NotDemonstrated;

  /// entangled iff product + k * error < bound (non-strict bound stays
  /// not_demonstrated); a NaN error contributes zero margin.
  void decide();
};

struct SweepRow {
  double phi_0 = 0.0;
  double w_over_lc = 0.0;
  double var_x_minus = 0.0;
  double var_p_plus = 0.0;
  double product = 0.0;
  double err_var_x = 0.0;
  double err_var_p = 0.0;
  double err_product = 0.0;
  bool ok = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Weighted linear fit var_p_plus = intercept + slope * (w/l_c)^2.
  double slope = 0.0;
  double slope_error = 0.0;
  double intercept = 0.0;
  // Where the product crosses the hbar^2/4 bound (monotone interpolation).
  bool crossing_found = false;
  double crossing_w_over_lc = 0.0;
  double crossing_error = 0.0;
};

}  // namespace spdc
