#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "factorlab/data_ingest.hpp"
#include "factorlab/distributions.hpp"
#include "factorlab/error.hpp"
#include "factorlab/matrix.hpp"

namespace factorlab {

/// Regressors plus response. The intercept column is implicit and always first.
class DesignMatrix {
 public:
  DesignMatrix(std::vector<std::string> regressors, std::span<const Vector> columns, Vector response)
      : names_(std::move(regressors)), y_(std::move(response)) {
    if (names_.size() != columns.size()) throw InputError("regressor names and columns differ in count");
    std::vector<std::string> keys;
    for (const auto& n : names_) {
      if (std::find(keys.begin(), keys.end(), column_key(n)) != keys.end()) {
        throw InputError("duplicate regressor '" + n + "'");
      }
      keys.push_back(column_key(n));
    }
    const std::size_t n = y_.size();
    x_ = Matrix(n, names_.size() + 1);
    for (std::size_t r = 0; r < n; ++r) x_(r, 0) = 1.0;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != n) {
        throw InputError("regressor '" + names_[c] + "' has " + std::to_string(columns[c].size()) +
                         " rows, response has " + std::to_string(n));
      }
      for (std::size_t r = 0; r < n; ++r) x_(r, c + 1) = columns[c][r];
    }
    for (double v : x_.data()) {
      if (!std::isfinite(v)) throw InputError("design contains a non-finite entry");
    }
    for (double v : y_) {
      if (!std::isfinite(v)) throw InputError("response contains a non-finite entry");
    }
  }

  std::size_t observations() const { return y_.size(); }
  std::size_t regressor_count() const { return names_.size(); }
  const std::vector<std::string>& regressors() const { return names_; }
  /// n x (m + 1), column 0 is the intercept.
  const Matrix& x() const { return x_; }
  const Vector& y() const { return y_; }

 private:
  std::vector<std::string> names_;
  Matrix x_;
  Vector y_;
};

struct RegressionFit {
  std::vector<std::string> regressors;  // m names; coefficient 0 is the intercept
  Vector beta;
  Vector std_errors;
  Vector t_stats;
  Vector p_values;
  std::optional<double> r_squared;  // empty when the response has no variation
  std::optional<double> adj_r_squared;
  double f_stat = 0.0;
  double f_p_value = 1.0;
  Vector residuals;
  std::size_t observations = 0;
  std::size_t dof = 0;
  double sigma = 0.0;  // residual standard error
};

enum class Stars { None, One, Two, Three };

/// *** p < 0.001, ** p < 0.01, * p < 0.05.
inline Stars significance(double p) {
  if (p < 0.001) return Stars::Three;
  if (p < 0.01) return Stars::Two;
  if (p < 0.05) return Stars::One;
  return Stars::None;
}

inline std::string_view to_string(Stars s) {
  switch (s) {
    case Stars::Three: return "***";
    case Stars::Two: return "**";
    case Stars::One: return "*";
    case Stars::None: break;
  }
  return "";
}

namespace detail {

// In-place Householder QR of an n x p matrix (n >= p). On return the upper triangle
// holds R; the reflectors are applied to `rhs` as they are generated, leaving Q^T rhs.
// Returns the index of the first column whose pivot is negligible relative to its
// original norm, or p when the matrix has full column rank.
inline std::size_t householder_qr(Matrix& a, Vector& rhs) {
  const std::size_t n = a.rows();
  const std::size_t p = a.cols();
  Vector col_norm(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a(i, j) * a(i, j);
    col_norm[j] = std::sqrt(s);
  }

  Vector v(n);
  for (std::size_t k = 0; k < p; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm += a(i, k) * a(i, k);
    norm = std::sqrt(norm);
    if (norm <= 1e-10 * col_norm[k] || col_norm[k] == 0.0) return k;

    const double alpha = a(k, k) > 0.0 ? -norm : norm;
    for (std::size_t i = k; i < n; ++i) v[i] = a(i, k);
    v[k] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) vnorm2 += v[i] * v[i];

    // H = I - 2 v v^T / (v^T v)
    for (std::size_t j = k; j < p; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += v[i] * a(i, j);
      s = 2.0 * s / vnorm2;
      for (std::size_t i = k; i < n; ++i) a(i, j) -= s * v[i];
    }
    double s = 0.0;
    for (std::size_t i = k; i < n; ++i) s += v[i] * rhs[i];
    s = 2.0 * s / vnorm2;
    for (std::size_t i = k; i < n; ++i) rhs[i] -= s * v[i];

    a(k, k) = alpha;
    for (std::size_t i = k + 1; i < n; ++i) a(i, k) = 0.0;
  }
  return p;
}

}  // namespace detail

/// Least squares with classical inference: standard errors from s^2 (X^T X)^-1,
/// two-sided t-test p-values and the all-slopes-zero F-test.
inline RegressionFit ols_fit(const DesignMatrix& design) {
  const std::size_t n = design.observations();
  const std::size_t m = design.regressor_count();
  const std::size_t p = m + 1;
  if (n <= p) {
    throw NumericError("need more observations than coefficients: n=" + std::to_string(n) +
                       ", coefficients=" + std::to_string(p));
  }

  Matrix r = design.x();
  Vector qty = design.y();
  const std::size_t bad = detail::householder_qr(r, qty);
  if (bad < p) {
    const std::string name = bad == 0 ? "intercept" : design.regressors()[bad - 1];
    throw NumericError("rank-deficient design: column '" + name + "' is linearly dependent on the columns before it");
  }

  RegressionFit fit;
  fit.regressors = design.regressors();
  fit.observations = n;
  fit.dof = n - p;

  fit.beta.assign(p, 0.0);
  for (std::size_t i = p; i-- > 0;) {
    double s = qty[i];
    for (std::size_t j = i + 1; j < p; ++j) s -= r(i, j) * fit.beta[j];
    fit.beta[i] = s / r(i, i);
  }

  const auto& x = design.x();
  const auto& y = design.y();
  fit.residuals.resize(n);
  double sse = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = y[i] - dot(x.row(i), fit.beta);
    sse += fit.residuals[i] * fit.residuals[i];
    mean_y += y[i];
  }
  mean_y /= static_cast<double>(n);
  double sst = 0.0;
  for (double v : y) sst += (v - mean_y) * (v - mean_y);

  const double s2 = sse / static_cast<double>(fit.dof);
  fit.sigma = std::sqrt(s2);

  // (X^T X)^-1 = R^-1 R^-T; only the diagonal is needed.
  Matrix rinv(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    rinv(j, j) = 1.0 / r(j, j);
    for (std::size_t i = j; i-- > 0;) {
      double s = 0.0;
      for (std::size_t k = i + 1; k <= j; ++k) s += r(i, k) * rinv(k, j);
      rinv(i, j) = -s / r(i, i);
    }
  }
  fit.std_errors.resize(p);
  fit.t_stats.resize(p);
  fit.p_values.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    double d = 0.0;
    for (std::size_t k = j; k < p; ++k) d += rinv(j, k) * rinv(j, k);
    fit.std_errors[j] = std::sqrt(s2 * d);
    if (fit.std_errors[j] > 0.0) {
      fit.t_stats[j] = fit.beta[j] / fit.std_errors[j];
      fit.p_values[j] = student_t_two_sided_p(fit.t_stats[j], static_cast<double>(fit.dof));
    } else if (fit.beta[j] == 0.0) {
      fit.t_stats[j] = 0.0;
      fit.p_values[j] = 1.0;
    } else {
      fit.t_stats[j] = std::copysign(std::numeric_limits<double>::infinity(), fit.beta[j]);
      fit.p_values[j] = 0.0;
    }
  }

  if (sst > 0.0) {
    fit.r_squared = std::clamp(1.0 - sse / sst, 0.0, 1.0);
    fit.adj_r_squared = 1.0 - (sse / static_cast<double>(fit.dof)) / (sst / static_cast<double>(n - 1));
    const double explained = std::max(sst - sse, 0.0);
    if (sse > 0.0) {
      fit.f_stat = (explained / static_cast<double>(m)) / s2;
      fit.f_p_value = f_sf(fit.f_stat, static_cast<double>(m), static_cast<double>(fit.dof));
    } else {
      fit.f_stat = std::numeric_limits<double>::infinity();
      fit.f_p_value = 0.0;
    }
  }
  return fit;
}

/// X beta for a design whose regressors match the fit's by name and order.
inline Vector predict(const RegressionFit& fit, const DesignMatrix& design) {
  const auto& names = design.regressors();
  bool match = names.size() == fit.regressors.size();
  for (std::size_t i = 0; match && i < names.size(); ++i) {
    match = column_key(names[i]) == column_key(fit.regressors[i]);
  }
  if (!match) throw InputError("design regressors do not match the fitted model");
  Vector out(design.observations());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = dot(design.x().row(i), fit.beta);
  return out;
}

struct PredictionMetrics {
  double rmse = 0.0;
  double mae = 0.0;
  std::optional<double> r_squared;  // empty when y has zero variance
};

inline PredictionMetrics prediction_metrics(std::span<const double> y, std::span<const double> yhat) {
  if (y.size() != yhat.size()) throw InputError("metric inputs differ in length");
  if (y.empty()) throw InputError("metric inputs are empty");
  const double n = static_cast<double>(y.size());
  double sse = 0.0, sae = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double e = y[i] - yhat[i];
    sse += e * e;
    sae += std::abs(e);
    mean += y[i];
  }
  mean /= n;
  double sst = 0.0;
  for (double v : y) sst += (v - mean) * (v - mean);

  PredictionMetrics m;
  m.rmse = std::sqrt(sse / n);
  m.mae = sae / n;
  if (sst > 0.0) m.r_squared = 1.0 - sse / sst;
  return m;
}

}  // namespace factorlab
