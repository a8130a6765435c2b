#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "artfima/errors.hpp"
#include "artfima/specialfn.hpp"

namespace artfima {

/// Evaluates 1 + sign * sum_i c_i z^i.
inline std::complex<double> eval_lag_polynomial(const std::vector<double>& c, double sign, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = (acc + sign * c[i]) * z;
  return 1.0 + acc;
}

/// Roots of 1 + sign * sum_i c_i z^i via companion-matrix eigenvalues.
inline std::vector<std::complex<double>> lag_polynomial_roots(const std::vector<double>& c, double sign) {
  std::size_t p = c.size();
  while (p > 0 && c[p - 1] == 0.0) --p;
  if (p == 0) return {};
  // monic form: z^p + sum_{i<p} (coef_i / coef_p) z^i, coef_0 = 1, coef_i = sign*c_{i-1}
  const double lead = sign * c[p - 1];
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t i = 1; i < p; ++i) comp(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < p; ++i) {
    const double coef = (i == 0) ? 1.0 : sign * c[i - 1];
    comp(i, p - 1) = -coef / lead;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<std::complex<double>> roots(p);
  for (std::size_t i = 0; i < p; ++i) roots[i] = es.eigenvalues()[i];
  return roots;
}

/// AR polynomial Phi(z) = 1 - sum phi_i z^i and MA polynomial Theta(z) = 1 + sum theta_i z^i.
struct ArmaPolynomials {
  std::vector<double> phi;
  std::vector<double> theta;

  static constexpr double root_margin = 1e-9;

  std::size_t p() const { return phi.size(); }
  std::size_t q() const { return theta.size(); }
  double phi_at_one() const { return eval_lag_polynomial(phi, -1.0, 1.0).real(); }
  double theta_at_one() const { return eval_lag_polynomial(theta, 1.0, 1.0).real(); }
  std::vector<std::complex<double>> ar_roots() const { return lag_polynomial_roots(phi, -1.0); }
  std::vector<std::complex<double>> ma_roots() const { return lag_polynomial_roots(theta, 1.0); }

  void validate() const {
    for (double v : phi) detail::require(std::isfinite(v), "ArmaPolynomials: non-finite AR coefficient");
    for (double v : theta) detail::require(std::isfinite(v), "ArmaPolynomials: non-finite MA coefficient");
    const auto ar = ar_roots();
    for (const auto& r : ar)
      if (std::abs(r) <= 1.0 + root_margin)
        throw invalid_parameter("ArmaPolynomials: AR polynomial has a root on or inside the unit circle");
    if (std::abs(theta_at_one()) <= root_margin) throw invalid_parameter("ArmaPolynomials: Theta(1) = 0");
    const auto ma = ma_roots();
    for (const auto& a : ar)
      for (const auto& b : ma)
        if (std::abs(a - b) <= root_margin)
          throw invalid_parameter("ArmaPolynomials: AR and MA polynomials share a root");
  }

  void require_invertible() const {
    for (const auto& r : ma_roots())
      if (std::abs(r) <= 1.0 + root_margin)
        throw non_invertible("ArmaPolynomials: MA polynomial has a root on or inside the unit circle");
  }
};

/// ARTFIMA(p, d, lambda, q) specification.
struct ArtfimaModel {
  ArmaPolynomials arma;
  double d = 0.0;
  double lambda = 0.0;

  void validate() const {
    detail::require(std::isfinite(d), "ArtfimaModel: d must be finite");
    detail::require(!(d < 0 && d == std::floor(d)), "ArtfimaModel: d must not be a negative integer");
    detail::require(std::isfinite(lambda) && lambda >= 0.0, "ArtfimaModel: lambda must be >= 0");
    arma.validate();
  }
  bool is_fractional_noise() const { return arma.p() == 0 && arma.q() == 0; }
  /// Asymptotic constant Theta(1)/Phi(1) of the untempered coefficients.
  double c_d() const { return arma.theta_at_one() / arma.phi_at_one(); }
};

enum class CoefficientKind { omega, psi, a, tempered_a, inverse_a };

inline const char* to_string(CoefficientKind k) {
  switch (k) {
    case CoefficientKind::omega: return "omega";
    case CoefficientKind::psi: return "psi";
    case CoefficientKind::a: return "a";
    case CoefficientKind::tempered_a: return "tempered_a";
    case CoefficientKind::inverse_a: return "inverse_a";
  }
  return "?";
}

struct CoefficientSeries {
  std::vector<double> values;
  CoefficientKind kind = CoefficientKind::omega;
  ArtfimaModel model;
  std::size_t truncation = 0;
};

/// Coefficients of (1 - z)^{-d}: omega(k) = Gamma(k + d)/(Gamma(k + 1) Gamma(d)).
inline CoefficientSeries omega_coeffs(double d, std::size_t n) {
  detail::require(std::isfinite(d), "omega_coeffs: d must be finite");
  CoefficientSeries s;
  s.kind = CoefficientKind::omega;
  s.model.d = d;
  s.truncation = n;
  s.values.resize(n + 1);
  s.values[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) s.values[k] = s.values[k - 1] * ((static_cast<double>(k) - 1.0 + d) / k);
  return s;
}

namespace detail {

// Power-series coefficients of num(z)/den(z); num = 1 + sum nc_i z^i, den = 1 - sum dc_i z^i.
// Entries past the point where the last max(len(dc),1) values are all below 1e-16 are zero.
inline std::vector<double> rational_series(const std::vector<double>& nc, const std::vector<double>& dc, std::size_t n,
                                           double num_sign, double den_sign) {
  std::vector<double> psi(n + 1, 0.0);
  psi[0] = 1.0;
  const std::size_t p = dc.size(), q = nc.size();
  const std::size_t run = std::max<std::size_t>(p, 1);
  std::size_t small = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    double v = (j <= q) ? num_sign * nc[j - 1] : 0.0;
    for (std::size_t i = 1; i <= std::min(j, p); ++i) v += den_sign * dc[i - 1] * psi[j - i];
    psi[j] = v;
    if (j > q) {
      small = std::abs(v) < 1e-16 ? small + 1 : 0;
      if (small >= run) {
        for (std::size_t k = j - run + 1; k <= j; ++k) psi[k] = 0.0;
        break;
      }
    }
  }
  return psi;
}

inline std::size_t last_nonzero(const std::vector<double>& v) {
  std::size_t j = v.size();
  while (j > 1 && v[j - 1] == 0.0) --j;
  return j - 1;
}

inline std::vector<double> truncated_convolution(const std::vector<double>& shortv, const std::vector<double>& longv,
                                                 std::size_t n) {
  const std::size_t J = last_nonzero(shortv);
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    compensated_sum s;
    for (std::size_t j = 0; j <= std::min(k, J); ++j) s.add(shortv[j] * longv[k - j]);
    out[k] = s.value();
  }
  return out;
}

}  // namespace detail

/// psi(j) coefficients of Theta(z)/Phi(z).
inline CoefficientSeries arma_psi(const ArmaPolynomials& arma, std::size_t n) {
  arma.validate();
  CoefficientSeries s;
  s.kind = CoefficientKind::psi;
  s.model.arma = arma;
  s.truncation = n;
  s.values = detail::rational_series(arma.theta, arma.phi, n, 1.0, 1.0);
  return s;
}

/// Multiplies entry k by exp(-lambda k).
inline void temper_in_place(std::vector<double>& v, double lambda) {
  if (lambda == 0.0) return;
  for (std::size_t k = 0; k < v.size(); ++k) v[k] *= std::exp(-lambda * static_cast<double>(k));
}

/// a_{-d}(k), the coefficients of Theta(z)/Phi(z) (1 - z)^{-d}; multiplied by exp(-lambda k) when lambda > 0.
inline CoefficientSeries artfima_coeffs(const ArtfimaModel& model, std::size_t n) {
  model.validate();
  CoefficientSeries s;
  s.model = model;
  s.truncation = n;
  const auto omega = omega_coeffs(model.d, n).values;
  if (model.is_fractional_noise()) {
    s.values = omega;
  } else {
    const auto psi = detail::rational_series(model.arma.theta, model.arma.phi, n, 1.0, 1.0);
    s.values = detail::truncated_convolution(psi, omega, n);
  }
  s.kind = model.lambda > 0 ? CoefficientKind::tempered_a : CoefficientKind::a;
  temper_in_place(s.values, model.lambda);
  return s;
}

/// Untempered inverse-filter coefficients of (Phi(z)/Theta(z)) (1 - z)^d.
inline CoefficientSeries inverse_coeffs(const ArtfimaModel& model, std::size_t n) {
  model.validate();
  model.arma.require_invertible();
  CoefficientSeries s;
  s.kind = CoefficientKind::inverse_a;
  s.model = model;
  s.truncation = n;
  const auto omega = omega_coeffs(-model.d, n).values;
  if (model.is_fractional_noise()) {
    s.values = omega;
  } else {
    const auto pi = detail::rational_series(model.arma.phi, model.arma.theta, n, -1.0, -1.0);
    s.values = detail::truncated_convolution(pi, omega, n);
  }
  return s;
}

/// Partial sums of sum_k k^j b(k) at geometric checkpoints, for the vanishing-moment conditions of d < 0.
struct MomentReport {
  std::vector<int> orders;
  std::vector<std::size_t> checkpoints;
  std::vector<std::vector<double>> partial_sums;  // [order][checkpoint]
  std::vector<bool> decaying;
  bool ok = true;
};

inline MomentReport check_moment_conditions(const CoefficientSeries& series, double d) {
  if (!(d < 0.0)) throw invalid_parameter("check_moment_conditions: requires d < 0");
  if (series.kind != CoefficientKind::a) throw invalid_parameter("check_moment_conditions: requires untempered kind a");
  if (series.model.lambda != 0.0) throw invalid_parameter("check_moment_conditions: requires lambda = 0");
  MomentReport r;
  const int J = static_cast<int>(std::floor(-d));
  for (int j = 0; j <= J; ++j) r.orders.push_back(j);
  const std::size_t n = series.values.size() - 1;
  for (std::size_t c = 10; c <= n; c *= 10) r.checkpoints.push_back(c);
  if (r.checkpoints.empty() || r.checkpoints.back() != n) r.checkpoints.push_back(n);
  for (int j : r.orders) {
    std::vector<double> sums;
    detail::compensated_sum s;
    std::size_t next = 0;
    for (std::size_t k = 0; k <= n && next < r.checkpoints.size(); ++k) {
      s.add(std::pow(static_cast<double>(k), j) * series.values[k]);
      if (k == r.checkpoints[next]) {
        sums.push_back(s.value());
        ++next;
      }
    }
    bool dec = true;
    for (std::size_t i = 1; i < sums.size(); ++i)
      if (!(std::abs(sums[i]) < std::abs(sums[i - 1]))) dec = false;
    r.decaying.push_back(dec);
    r.ok = r.ok && dec;
    r.partial_sums.push_back(std::move(sums));
  }
  return r;
}

}  // namespace artfima
