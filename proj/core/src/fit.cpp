#include "spdc/fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "spdc/errors.hpp"

namespace spdc {

namespace {

struct Problem {
  std::vector<double> u;  // coordinates
  std::vector<double> y;  // rates
  std::vector<double> w;  // weights (inverse variance)
};

double model(const Eigen::Vector4d& p, double u) {
  const double d = (u - p[1]) / p[2];
  return p[0] * std::exp(-0.5 * d * d) + p[3];
}

// Residuals r_i = sqrt(w_i) (model - y_i) and the analytic Jacobian.
void residuals(const Problem& pr, const Eigen::Vector4d& p, Eigen::VectorXd& r,
               Eigen::MatrixX4d* jac) {
  const std::size_t n = pr.u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double sw = std::sqrt(pr.w[i]);
    const double d = (pr.u[i] - p[1]) / p[2];
    const double g = std::exp(-0.5 * d * d);
    r[static_cast<long>(i)] = sw * (p[0] * g + p[3] - pr.y[i]);
    if (jac) {
      auto& J = *jac;
      const long li = static_cast<long>(i);
      J(li, 0) = sw * g;
      J(li, 1) = sw * p[0] * g * d / p[2];
      J(li, 2) = sw * p[0] * g * d * d / p[2];
      J(li, 3) = sw;
    }
  }
}

Eigen::Vector4d initial_guess(const Problem& pr) {
  const auto [lo, hi] = std::minmax_element(pr.y.begin(), pr.y.end());
  const double b0 = *lo;
  const double a0 = std::max(*hi - *lo, 1e-300);
  double mass = 0.0, first = 0.0;
  for (std::size_t i = 0; i < pr.y.size(); ++i) {
    const double v = std::max(pr.y[i] - b0, 0.0);
    mass += v;
    first += v * pr.u[i];
  }
  const double mu0 = first / mass;
  double second = 0.0;
  for (std::size_t i = 0; i < pr.y.size(); ++i) {
    const double v = std::max(pr.y[i] - b0, 0.0);
    second += v * (pr.u[i] - mu0) * (pr.u[i] - mu0);
  }
  double s0 = std::sqrt(second / mass);
  if (!(s0 > 0.0) || !std::isfinite(s0)) {
    const auto [ulo, uhi] = std::minmax_element(pr.u.begin(), pr.u.end());
    s0 = (*uhi - *ulo) / 4.0;
  }
  return Eigen::Vector4d(a0, mu0, s0, b0);
}

GaussianFit levenberg_fit(const Problem& pr) {
  const std::size_t n = pr.u.size();
  {
    std::set<double> distinct(pr.u.begin(), pr.u.end());
    if (distinct.size() < 5) {
      throw std::invalid_argument("fit_gaussian: need >= 5 distinct coordinates");
    }
  }
  double total = 0.0;
  for (double v : pr.y) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("fit_gaussian: non-finite sample");
    }
    total += v;
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("fit_gaussian: total counts must be positive");
  }
  const auto [ylo, yhi] = std::minmax_element(pr.y.begin(), pr.y.end());
  if (*yhi - *ylo <= 0.0) {
    throw NumericError("fit_gaussian: no peak (all samples equal)");
  }

  Eigen::Vector4d p = initial_guess(pr);
  Eigen::VectorXd r(static_cast<long>(n));
  Eigen::MatrixX4d J(static_cast<long>(n), 4);
  residuals(pr, p, r, &J);
  double chisq = r.squaredNorm();
  double lambda = 1e-3;

  GaussianFit fit;
  const double tol = 1e-8;
  const std::size_t max_iter = 200;
  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    const Eigen::Matrix4d jtj = J.transpose() * J;
    const Eigen::Vector4d g = J.transpose() * r;
    Eigen::Matrix4d damped = jtj;
    for (int d = 0; d < 4; ++d) {
      damped(d, d) += lambda * std::max(jtj(d, d), 1e-30);
    }
    const Eigen::Vector4d delta = damped.ldlt().solve(-g);
    if (!delta.allFinite()) {
      lambda *= 10.0;
      continue;
    }
    Eigen::Vector4d trial = p + delta;
    if (trial[2] == 0.0) trial[2] = p[2];
    Eigen::VectorXd r_trial(static_cast<long>(n));
    residuals(pr, trial, r_trial, nullptr);
    const double chisq_trial = r_trial.squaredNorm();
    if (chisq_trial <= chisq) {
      double max_rel = 0.0;
      for (int d = 0; d < 4; ++d) {
        max_rel = std::max(max_rel,
                           std::abs(delta[d]) / (std::abs(p[d]) + 1e-300));
      }
      const double improvement = chisq - chisq_trial;
      p = trial;
      chisq = chisq_trial;
      residuals(pr, p, r, &J);
      lambda = std::max(lambda / 3.0, 1e-12);
      if (max_rel < tol || improvement <= 1e-12 * (chisq + 1e-300)) {
        fit.converged = true;
        ++iter;
        break;
      }
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) {
        // Stalled damping: noiseless data can sit at the floating-point floor
        // of chi^2 where no step improves; that is a converged fit.
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          scale += pr.w[i] * pr.y[i] * pr.y[i];
        }
        fit.converged = chisq <= 1e-16 * (scale + 1e-300);
        ++iter;
        break;
      }
    }
  }

  fit.iterations = iter;
  fit.amplitude = p[0];
  fit.center = p[1];
  fit.sigma = std::abs(p[2]);
  fit.baseline = p[3];
  if (!(fit.sigma > 0.0) || !std::isfinite(fit.sigma)) {
    fit.converged = false;
  }

  const Eigen::Matrix4d jtj = J.transpose() * J;
  const Eigen::Matrix4d cov = jtj.completeOrthogonalDecomposition().pseudoInverse();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) fit.covariance[a][b] = cov(a, b);
  }
  fit.reduced_chisq = chisq / static_cast<double>(n > 4 ? n - 4 : 1);
  return fit;
}

}  // namespace

double GaussianFit::sigma_error() const {
  const double v = covariance[2][2];
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

double GaussianFit::variance_error() const {
  return 2.0 * std::abs(sigma) * sigma_error();
}

GaussianFit fit_gaussian(std::span<const FitPoint> points) {
  Problem pr;
  pr.u.reserve(points.size());
  pr.y.reserve(points.size());
  pr.w.reserve(points.size());
  for (const auto& pt : points) {
    if (!(pt.dwell > 0.0)) {
      throw std::invalid_argument("fit_gaussian: dwell must be > 0");
    }
    if (pt.counts < 0.0) {
      throw std::invalid_argument("fit_gaussian: negative counts");
    }
    pr.u.push_back(pt.coordinate);
    pr.y.push_back(pt.counts / pt.dwell);
    pr.w.push_back(pt.dwell * pt.dwell / std::max(pt.counts, 1.0));
  }
  return levenberg_fit(pr);
}

GaussianFit fit_profile(std::span<const double> coords,
                        std::span<const double> values) {
  if (coords.size() != values.size()) {
    throw std::invalid_argument("fit_profile: size mismatch");
  }
  Problem pr;
  pr.u.assign(coords.begin(), coords.end());
  pr.y.assign(values.begin(), values.end());
  pr.w.assign(values.size(), 1.0);
  return levenberg_fit(pr);
}

}  // namespace spdc
