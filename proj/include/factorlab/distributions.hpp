#pragma once

#include <cmath>
#include <limits>

#include "factorlab/error.hpp"

namespace factorlab {

namespace detail {

// Continued fraction for the incomplete beta function, modified Lentz method.
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericError("incomplete beta continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw NumericError("incomplete beta needs a, b > 0");
  if (std::isnan(x)) throw NumericError("incomplete beta at NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges fast below the mean; use the mirror identity above it.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// Upper tail P(T > |t|) * 2 for Student's t. Computed directly, so it keeps full
/// relative precision far into the tail.
inline double student_t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) throw NumericError("Student t needs dof > 0");
  if (std::isnan(t)) throw NumericError("Student t at NaN");
  if (std::isinf(t)) return 0.0;
  const double z = dof / (dof + t * t);
  return incomplete_beta(0.5 * dof, 0.5, z);
}

inline double student_t_cdf(double x, double dof) {
  if (!(dof > 0.0)) throw NumericError("Student t needs dof > 0");
  const double tail = 0.5 * student_t_two_sided_p(x, dof);
  return x > 0.0 ? 1.0 - tail : tail;
}

/// P(F > x) for the F(d1, d2) distribution.
inline double f_sf(double x, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw NumericError("F distribution needs d1, d2 > 0");
  if (std::isnan(x) || x < 0.0) throw NumericError("F survival function needs x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return incomplete_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * x));
}

}  // namespace factorlab
