#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "artfima/errors.hpp"

namespace artfima::quad {

/// Integral over [a, b] by tanh-sinh; tolerates integrable endpoint singularities.
/// f may take (x) or (x, xc) where xc is the signed distance to the nearer endpoint.
template <class F>
double finite(F&& f, double a, double b, double tol = 1e-13) {
  if (a == b) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  double err = 0.0, l1 = 0.0;
  const double v = ts.integrate(f, a, b, tol, &err, &l1);
  if (!std::isfinite(v)) throw convergence_error("quadrature: non-finite integral");
  if (err > 1e3 * tol * std::max(1.0, l1)) throw convergence_error("quadrature: tanh-sinh did not reach tolerance");
  return v;
}

/// Integral over [a, infinity) by exp-sinh.
template <class F>
double half_line(F&& f, double a, double tol = 1e-13) {
  static thread_local boost::math::quadrature::exp_sinh<double> es(12);
  double err = 0.0, l1 = 0.0;
  const double v = es.integrate([&](double u) { return f(a + u); }, 0.0, std::numeric_limits<double>::infinity(), tol,
                                &err, &l1);
  if (!std::isfinite(v)) throw convergence_error("quadrature: non-finite integral");
  if (err > 1e3 * tol * std::max(1.0, l1)) throw convergence_error("quadrature: exp-sinh did not reach tolerance");
  return v;
}

/// Adaptive 61-point Gauss-Kronrod on [a, b] for smooth integrands.
template <class F>
double smooth(F&& f, double a, double b, double tol = 1e-12, unsigned depth = 20) {
  double err = 0.0, l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, depth, tol, &err, &l1);
  if (!std::isfinite(v)) throw convergence_error("quadrature: non-finite integral");
  if (err > 1e3 * tol * std::max(1.0, l1)) throw convergence_error("quadrature: Gauss-Kronrod did not reach tolerance");
  return v;
}

}  // namespace artfima::quad
