#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "artfima/errors.hpp"
#include "artfima/rng.hpp"
#include "artfima/specialfn.hpp"

namespace artfima {

/// Parameters (alpha, sigma, beta) of a strictly stable law with characteristic exponent
/// -sigma^alpha |theta|^alpha (1 - i beta tan(pi alpha / 2) sign theta).
struct StableParams {
  double alpha = 2.0;
  double sigma = 1.0;
  double beta = 0.0;

  void validate() const {
    detail::require(alpha > 1.0 && alpha <= 2.0, "stable law: alpha must lie in (1, 2]");
    detail::require(sigma > 0.0 && std::isfinite(sigma), "stable law: sigma must be positive");
    detail::require(beta >= -1.0 && beta <= 1.0, "stable law: beta must lie in [-1, 1]");
  }
};

/// Mean-zero innovation law in the domain of normal attraction of an alpha-stable law.
struct InnovationLaw {
  enum class Kind { gaussian, stable, pareto };
  Kind kind = Kind::gaussian;
  double variance = 1.0;  // gaussian
  double alpha = 2.0;     // stable, pareto
  double sigma = 1.0;     // stable
  double beta = 0.0;      // stable
  double c1 = 1.0, c2 = 1.0;  // pareto tail constants

  static InnovationLaw gaussian(double variance = 1.0) {
    InnovationLaw l;
    l.kind = Kind::gaussian;
    l.variance = variance;
    l.validate();
    return l;
  }
  static InnovationLaw stable(double alpha, double sigma, double beta) {
    InnovationLaw l;
    l.kind = Kind::stable;
    l.alpha = alpha;
    l.sigma = sigma;
    l.beta = beta;
    l.validate();
    return l;
  }
  static InnovationLaw pareto(double alpha, double c1, double c2) {
    InnovationLaw l;
    l.kind = Kind::pareto;
    l.alpha = alpha;
    l.c1 = c1;
    l.c2 = c2;
    l.validate();
    return l;
  }

  void validate() const {
    switch (kind) {
      case Kind::gaussian:
        detail::require(variance > 0.0 && std::isfinite(variance), "Gaussian law: variance must be positive");
        break;
      case Kind::stable:
        StableParams{alpha, sigma, beta}.validate();
        break;
      case Kind::pareto:
        detail::require(alpha > 1.0 && alpha < 2.0, "Pareto-tail law: alpha must lie in (1, 2)");
        detail::require(c1 >= 0.0 && c2 >= 0.0 && c1 + c2 > 0.0, "Pareto-tail law: need c1, c2 >= 0, c1 + c2 > 0");
        break;
    }
  }

  /// Stability index of the attracting law.
  double index() const { return kind == Kind::gaussian ? 2.0 : alpha; }
  bool finite_variance() const { return kind == Kind::gaussian || (kind == Kind::stable && alpha == 2.0); }
  double second_moment() const {
    if (kind == Kind::gaussian) return variance;
    if (kind == Kind::stable && alpha == 2.0) return 2.0 * sigma * sigma;
    return std::numeric_limits<double>::infinity();
  }

  /// Stable law attracting n^{-1/alpha}(zeta_1 + ... + zeta_n).
  StableParams limit_params() const {
    switch (kind) {
      case Kind::gaussian: return {2.0, std::sqrt(variance / 2.0), 0.0};
      case Kind::stable: return {alpha, sigma, beta};
      case Kind::pareto: {
        const double C = (1.0 - alpha) / (gamma_fn(2.0 - alpha) * std::cos(std::numbers::pi * alpha / 2.0));
        return {alpha, std::pow((c1 + c2) / C, 1.0 / alpha), (c1 - c2) / (c1 + c2)};
      }
    }
    return {};
  }

  std::string describe() const {
    switch (kind) {
      case Kind::gaussian: return "gaussian(variance=" + std::to_string(variance) + ")";
      case Kind::stable:
        return "stable(alpha=" + std::to_string(alpha) + ",sigma=" + std::to_string(sigma) +
               ",beta=" + std::to_string(beta) + ")";
      case Kind::pareto:
        return "pareto(alpha=" + std::to_string(alpha) + ",c1=" + std::to_string(c1) + ",c2=" + std::to_string(c2) + ")";
    }
    return "?";
  }
};

/// One draw from the stable law by the Chambers-Mallows-Stuck transform.
inline double stable_draw(const StableParams& s, RngStream& rng) {
  const double V = std::numbers::pi * (rng.uniform() - 0.5);
  const double W = rng.exponential();
  if (s.alpha == 2.0) return s.sigma * 2.0 * std::sin(V) * std::sqrt(W);
  const double a = s.alpha;
  const double tq = s.beta * std::tan(std::numbers::pi * a / 2.0);
  const double B = std::atan(tq) / a;
  const double S = std::pow(1.0 + tq * tq, 1.0 / (2.0 * a));
  const double x = S * std::sin(a * (V + B)) / std::pow(std::cos(V), 1.0 / a) *
                   std::pow(std::cos(V - a * (V + B)) / W, (1.0 - a) / a);
  return s.sigma * x;
}

namespace detail {

// Three-part mixture: uniform core (weight 1/2) plus Pareto tails beyond x_m, core shifted so the mean is 0.
struct ParetoMixture {
  double alpha, w1, w2, xm, center;
  explicit ParetoMixture(const InnovationLaw& l) : alpha(l.alpha) {
    const double w0 = 0.5;
    w1 = (1.0 - w0) * l.c1 / (l.c1 + l.c2);
    w2 = (1.0 - w0) * l.c2 / (l.c1 + l.c2);
    xm = std::pow((l.c1 + l.c2) / (1.0 - w0), 1.0 / alpha);
    center = -(w1 - w2) * xm * alpha / (alpha - 1.0) / w0;
  }
  double draw(RngStream& rng) const {
    const double u = rng.uniform();
    const double v = rng.uniform();
    if (u < w1) return xm * std::pow(v, -1.0 / alpha);
    if (u < w1 + w2) return -xm * std::pow(v, -1.0 / alpha);
    return center + xm * (v - 0.5);
  }
};

}  // namespace detail

/// n i.i.d. draws from the law.
inline std::vector<double> sample(const InnovationLaw& law, std::size_t n, RngStream& rng) {
  law.validate();
  std::vector<double> out(n);
  switch (law.kind) {
    case InnovationLaw::Kind::gaussian: {
      const double sd = std::sqrt(law.variance);
      for (auto& x : out) x = sd * rng.normal();
      break;
    }
    case InnovationLaw::Kind::stable: {
      const StableParams p{law.alpha, law.sigma, law.beta};
      for (auto& x : out) x = stable_draw(p, rng);
      break;
    }
    case InnovationLaw::Kind::pareto: {
      const detail::ParetoMixture mix(law);
      for (auto& x : out) x = mix.draw(rng);
      break;
    }
  }
  return out;
}

/// Independent increments of the stable Levy motion over a mesh dt.
inline std::vector<double> levy_increments(double alpha, double sigma, double beta, double dt, std::size_t n,
                                           RngStream& rng) {
  detail::require(dt > 0.0 && std::isfinite(dt), "levy_increments: dt must be positive");
  StableParams p{alpha, sigma * std::pow(dt, 1.0 / alpha), beta};
  p.validate();
  std::vector<double> out(n);
  for (auto& x : out) x = stable_draw(p, rng);
  return out;
}

/// Log of the characteristic function of the stable law at theta.
inline std::complex<double> stable_log_cf(const StableParams& s, double theta) {
  const double m = std::pow(s.sigma * std::abs(theta), s.alpha);
  const double sg = theta > 0 ? 1.0 : (theta < 0 ? -1.0 : 0.0);
  return {-m, m * s.beta * std::tan(std::numbers::pi * s.alpha / 2.0) * sg};
}

}  // namespace artfima
