#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/digamma.hpp>

#include "artfima/errors.hpp"

namespace artfima {

namespace detail {

/// Neumaier compensated accumulator.
struct compensated_sum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

inline constexpr std::array<double, 9> lanczos_coeffs = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

inline double lanczos_sum(double xm1) {
  double a = lanczos_coeffs[0];
  for (int i = 1; i < 9; ++i) a += lanczos_coeffs[i] / (xm1 + i);
  return a;
}

// Stirling remainder 1/(12x) - 1/(360x^3) + ...
inline double stirling_tail(double x) {
  const double r = 1.0 / x, r2 = r * r;
  return r * (1.0 / 12 + r2 * (-1.0 / 360 + r2 * (1.0 / 1260 + r2 * (-1.0 / 1680 + r2 * (1.0 / 1188)))));
}

}  // namespace detail

/// sin(pi x), exact zero at integers.
inline double sin_pi(double x) {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  double r = std::fmod(x, 2.0);  // (-2, 2)
  if (r > 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(std::numbers::pi * r);
}

/// Gamma function on the real line. Throws pole_error at non-positive integers.
inline double gamma_fn(double x) {
  if (std::isnan(x)) throw invalid_parameter("gamma_fn: NaN argument");
  if (detail::is_nonpositive_integer(x)) throw pole_error("gamma_fn: pole at " + std::to_string(x));
  if (x < 0.5) return std::numbers::pi / (sin_pi(x) * gamma_fn(1.0 - x));
  if (x > 171.7) return std::numeric_limits<double>::infinity();
  const double xm1 = x - 1.0;
  const double t = xm1 + 7.5;
  const double h = std::pow(t, 0.5 * (xm1 + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * h * (h * std::exp(-t)) * detail::lanczos_sum(xm1);
}

/// log|Gamma(x)|; the sign of Gamma(x) is written to *sign when given.
inline double log_abs_gamma(double x, int* sign = nullptr) {
  if (std::isnan(x)) throw invalid_parameter("log_abs_gamma: NaN argument");
  if (detail::is_nonpositive_integer(x)) throw pole_error("log_abs_gamma: pole at " + std::to_string(x));
  if (x < 0.5) {
    const double s = sin_pi(x);
    int sg = 0;
    const double l = std::log(std::numbers::pi / std::abs(s)) - log_abs_gamma(1.0 - x, &sg);
    if (sign) *sign = (s < 0 ? -1 : 1) * sg;
    return l;
  }
  if (sign) *sign = 1;
  if (x >= 20.0) {
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + detail::stirling_tail(x);
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t +
         std::log(detail::lanczos_sum(xm1));
}

/// 1/Gamma(x), zero at the poles.
inline double rgamma(double x) {
  if (detail::is_nonpositive_integer(x)) return 0.0;
  return 1.0 / gamma_fn(x);
}

/// log(Gamma(x)/Gamma(y)) for x, y > 0, stable when both are large and close.
inline double log_gamma_ratio(double x, double y) {
  if (!(x > 0.0 && y > 0.0)) throw invalid_parameter("log_gamma_ratio: arguments must be positive");
  if (x >= 20.0 && y >= 20.0) {
    const double dlt = x - y;
    return (y - 0.5) * std::log1p(dlt / y) + dlt * std::log(x) - dlt + detail::stirling_tail(x) -
           detail::stirling_tail(y);
  }
  return log_abs_gamma(x) - log_abs_gamma(y);
}

struct Hyp2f1Options {
  double rel_tol = 1e-14;
  long max_terms = 100000;
  long max_terms_integer = 1000000;
  double euler_threshold = 0.95;
};

namespace detail {

// Plain series; returns false when the budget runs out.
inline bool series_2f1(double a, double b, double c, double z, double tol, long max_terms, double& out,
                       double* abs_sum = nullptr) {
  compensated_sum s;
  double t = 1.0, at = 1.0;
  s.add(1.0);
  const double transient = 2.0 * std::max({std::abs(a), std::abs(b), std::abs(c)}) + 2.0;
  for (long n = 0; n < max_terms; ++n) {
    const double r = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    t *= r;
    if (t == 0.0) {
      out = s.value();
      if (abs_sum) *abs_sum = at;
      return true;
    }
    s.add(t);
    at += std::abs(t);
    if (n + 1.0 > transient) {
      const double q = std::max(std::abs(r), std::abs(z));
      if (q < 1.0 && std::abs(t) * q / (1.0 - q) <= tol * std::abs(s.value())) {
        out = s.value();
        if (abs_sum) *abs_sum = at;
        return true;
      }
    }
  }
  return false;
}

// Sum over n of (a)_n (b)_n / (n!)^2 [2 psi(n+1) - psi(a+n) - psi(b+n) - log w] w^n.
inline bool log_series_2f1(double a, double b, double w, double tol, long max_terms, double& out, double& abs_out) {
  using boost::math::digamma;
  double pa = digamma(a), pb = digamma(b), p1 = digamma(1.0);
  const double lw = std::log(w);
  double coef = 1.0;
  compensated_sum s;
  double at = 0.0;
  const double transient = 2.0 * std::max(std::abs(a), std::abs(b)) + 2.0;
  for (long n = 0; n < max_terms; ++n) {
    const double term = coef * (2.0 * p1 - pa - pb - lw);
    s.add(term);
    at += std::abs(term);
    const double r = (a + n) * (b + n) / ((n + 1.0) * (n + 1.0)) * w;
    if (n > transient && std::abs(r) < 1.0 &&
        std::abs(term) * std::abs(r) / (1.0 - std::abs(r)) * 2.0 <= tol * std::abs(s.value())) {
      out = s.value();
      abs_out = at;
      return true;
    }
    coef *= r;
    pa += 1.0 / (a + n);
    pb += 1.0 / (b + n);
    p1 += 1.0 / (n + 1.0);
    if (coef == 0.0) {
      out = s.value();
      abs_out = at;
      return true;
    }
  }
  return false;
}

// Gamma(x)/Gamma(y) * Gamma(u)/Gamma(v) via logs, zero when a denominator sits on a pole.
inline double gamma_quotient(double x, double y, double u, double v) {
  if (is_nonpositive_integer(y) || is_nonpositive_integer(v)) return 0.0;
  int s1 = 1, s2 = 1, s3 = 1, s4 = 1;
  double l = 0.0;
  if (x > 0 && y > 0)
    l += log_gamma_ratio(x, y);
  else
    l += log_abs_gamma(x, &s1) - log_abs_gamma(y, &s2);
  if (u > 0 && v > 0)
    l += log_gamma_ratio(u, v);
  else
    l += log_abs_gamma(u, &s3) - log_abs_gamma(v, &s4);
  return s1 * s2 * s3 * s4 * std::exp(l);
}

}  // namespace detail

/// Gauss hypergeometric 2F1(a, b; c; z) for 0 <= z < 1, with w = 1 - z passed separately
/// so that arguments extremely close to 1 keep their precision.
inline double gauss_2f1(double a, double b, double c, double z, double w, const Hyp2f1Options& opt = {}) {
  if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(z)))
    throw invalid_parameter("gauss_2f1: non-finite argument");
  if (detail::is_nonpositive_integer(c)) throw pole_error("gauss_2f1: c is a non-positive integer");
  if (!(z >= 0.0 && z < 1.0)) throw invalid_parameter("gauss_2f1: z must lie in [0, 1)");
  if (z == 0.0) return 1.0;

  const bool terminating = detail::is_nonpositive_integer(a) || detail::is_nonpositive_integer(b);
  double out = 0.0;
  if (z <= opt.euler_threshold || terminating) {
    if (detail::series_2f1(a, b, c, z, opt.rel_tol, opt.max_terms, out)) return out;
    throw convergence_error("gauss_2f1: series did not converge within the term budget");
  }

  const double s = c - a - b;
  const bool s_integer = std::abs(s - std::round(s)) < 1e-12;
  const double expected_terms = std::log(opt.rel_tol) / std::log(z);
  const long budget = s_integer ? opt.max_terms_integer : opt.max_terms;

  if (expected_terms < 0.5 * budget) {
    if (s_integer) {
      if (detail::series_2f1(a, b, c, z, opt.rel_tol, budget, out)) return out;
    } else {
      if (detail::series_2f1(c - a, c - b, c, z, opt.rel_tol, budget, out)) return std::pow(w, s) * out;
    }
  }

  // Argument too close to 1 for either series: expand around z = 1.
  if (std::abs(s) < 1e-12) {
    if (detail::is_nonpositive_integer(a) || detail::is_nonpositive_integer(b))
      throw convergence_error("gauss_2f1: logarithmic case with polynomial parameters");
    double sum = 0.0, abs_sum = 0.0;
    if (!detail::log_series_2f1(a, b, w, opt.rel_tol, opt.max_terms, sum, abs_sum))
      throw convergence_error("gauss_2f1: logarithmic expansion did not converge");
    int sa = 1, sb = 1;
    double l = 0.0;
    if (b > 0 && c > 0)
      l = log_gamma_ratio(c, b);
    else {
      int sc = 1;
      l = log_abs_gamma(c, &sc) - log_abs_gamma(b, &sb);
      sb *= sc;
    }
    l -= log_abs_gamma(a, &sa);
    if (abs_sum > 1e6 * std::abs(sum)) throw convergence_error("gauss_2f1: cancellation in logarithmic expansion");
    return sa * sb * std::exp(l) * sum;
  }
  if (s_integer) throw convergence_error("gauss_2f1: integer c-a-b with argument too close to 1");

  double f1 = 0.0, f2 = 0.0, m1 = 0.0, m2 = 0.0;
  const double A1 = detail::gamma_quotient(c, c - a, s, c - b);
  const double A2 = detail::gamma_quotient(c, b, -s, a);
  if (A1 != 0.0 && !detail::series_2f1(a, b, 1.0 - s, w, opt.rel_tol, opt.max_terms, f1, &m1))
    throw convergence_error("gauss_2f1: connection series did not converge");
  if (A2 != 0.0 && !detail::series_2f1(c - a, c - b, 1.0 + s, w, opt.rel_tol, opt.max_terms, f2, &m2))
    throw convergence_error("gauss_2f1: connection series did not converge");
  const double ws = std::pow(w, s);
  const double result = A1 * f1 + A2 * ws * f2;
  const double scale = std::abs(A1) * m1 + std::abs(A2) * ws * m2;
  if (scale > 1e6 * std::abs(result)) throw convergence_error("gauss_2f1: cancellation in connection formula");
  return result;
}

inline double gauss_2f1(double a, double b, double c, double z, const Hyp2f1Options& opt = {}) {
  return gauss_2f1(a, b, c, z, 1.0 - z, opt);
}

}  // namespace artfima
