#pragma once

// Reference implementations that share no code with the library: distribution
// functions by adaptive quadrature of the density, least squares by pseudo-inverse.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

inline double t_density(double x, double v) {
  const double log_c = std::lgamma(0.5 * (v + 1.0)) - std::lgamma(0.5 * v) - 0.5 * std::log(v * std::numbers::pi);
  return std::exp(log_c - 0.5 * (v + 1.0) * std::log1p(x * x / v));
}

/// P(T <= x) from the density: 0.5 +/- integral over [0, |x|].
inline double t_cdf(double x, double v) {
  using boost::math::quadrature::gauss_kronrod;
  if (x == 0.0) return 0.5;
  const double a = std::abs(x);
  double err = 0.0;
  const double body = gauss_kronrod<double, 61>::integrate([&](double s) { return t_density(s, v); }, 0.0, a, 15,
                                                           1e-14, &err);
  return x > 0 ? 0.5 + body : 0.5 - body;
}

/// P(F > x). With x = u^2 the integrand stays finite at 0 even for d1 = 1.
inline double f_sf(double x, double d1, double d2) {
  using boost::math::quadrature::gauss_kronrod;
  const double log_c = std::lgamma(0.5 * (d1 + d2)) - std::lgamma(0.5 * d1) - std::lgamma(0.5 * d2) +
                       0.5 * d1 * std::log(d1 / d2);
  auto integrand = [&](double u) {
    if (u == 0.0) return d1 == 1.0 ? 2.0 * std::exp(log_c) : 0.0;
    const double t = u * u;
    return 2.0 * u *
           std::exp(log_c + (0.5 * d1 - 1.0) * std::log(t) - 0.5 * (d1 + d2) * std::log1p(d1 * t / d2));
  };
  double err = 0.0;
  const double cdf = gauss_kronrod<double, 61>::integrate(integrand, 0.0, std::sqrt(x), 15, 1e-14, &err);
  return 1.0 - cdf;
}

struct OlsOracle {
  Eigen::VectorXd beta;
  Eigen::VectorXd t_stats;
  double r_squared = 0.0;
};

/// beta = pinv(X) y with the intercept column prepended; covariance s^2 pinv(X^T X).
inline OlsOracle ols(const std::vector<std::vector<double>>& regressors, const std::vector<double>& y) {
  const Eigen::Index n = static_cast<Eigen::Index>(y.size());
  const Eigen::Index p = static_cast<Eigen::Index>(regressors.size()) + 1;
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd yy(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < p; ++j) x(i, j) = regressors[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i)];
    yy(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::MatrixXd pinv = x.completeOrthogonalDecomposition().pseudoInverse();
  OlsOracle out;
  out.beta = pinv * yy;
  const Eigen::VectorXd resid = yy - x * out.beta;
  const double sse = resid.squaredNorm();
  const double sst = (yy.array() - yy.mean()).square().sum();
  out.r_squared = 1.0 - sse / sst;
  const double s2 = sse / static_cast<double>(n - p);
  const Eigen::MatrixXd cov = s2 * (x.transpose() * x).completeOrthogonalDecomposition().pseudoInverse();
  out.t_stats = out.beta.array() / cov.diagonal().array().sqrt();
  return out;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle
