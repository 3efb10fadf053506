#pragma once

#include <span>
#include <vector>

#include "spdc/analysis_types.hpp"
#include "spdc/biphoton.hpp"
#include "spdc/config.hpp"
#include "spdc/fit.hpp"

namespace spdc {

/// Combine the fitted x_- and q_+ widths into the uncertainty product.
/// Both fits must have converged; the error is first-order propagation from
/// the fit covariances. The verdict multiplier k defaults to the central
/// value (k = 0).
EntanglementReport epr_product(const GaussianFit& fit_x_minus,
                               const GaussianFit& fit_p_plus, double k = 0.0);

/// Ratio of the Gaussian-fitted widths of the rotated sections: minor/major
/// axis of the joint distribution. Position space reports sigma_-/sigma_+,
/// momentum space sigma_+/sigma_-.
double aspect_ratio(const JointDistribution& dist);

/// Sample standard deviation (ddof = 1) across independent runs; the error
/// bar convention for repeated virtual measurements. Requires >= 2 values.
double bootstrap_error(std::span<const double> values);

/// Full coherence study: for each phi_0 run the pipeline with the
/// pseudo-thermal pump (phi_0 = 0 falls back to the coherent source), fit
/// var_p_plus = a + c (w/l_c)^2 by weighted linear regression and locate the
/// product's crossing of the hbar^2/4 bound. Individual row failures are
/// recorded; the sweep fails only if more than half the rows fail.
SweepResult coherence_sweep(const RunConfig& base, std::span<const double> phi_0_list);

}  // namespace spdc
