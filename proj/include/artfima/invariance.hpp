#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "artfima/coefficients.hpp"
#include "artfima/errors.hpp"
#include "artfima/innovations.hpp"
#include "artfima/parallel.hpp"
#include "artfima/process.hpp"
#include "artfima/rng.hpp"
#include "artfima/stats.hpp"
#include "artfima/tfm.hpp"

namespace artfima {

enum class Regime { strong, weak, moderate };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::strong: return "strong";
    case Regime::weak: return "weak";
    case Regime::moderate: return "moderate";
  }
  return "?";
}

inline Regime parse_regime(const std::string& s) {
  if (s == "strong") return Regime::strong;
  if (s == "weak") return Regime::weak;
  if (s == "moderate") return Regime::moderate;
  throw invalid_parameter("unknown regime '" + s + "' (expected strong, weak or moderate)");
}

/// Sequence N -> lambda_N together with the declared limit lambda* of N lambda_N (infinity allowed).
struct TemperingScheme {
  std::function<double(double)> rule;
  double declared_lambda_star = 0.0;
  std::string description;

  double lambda(std::size_t N) const {
    const double v = rule(static_cast<double>(N));
    if (!(v > 0.0) || !std::isfinite(v)) throw invalid_parameter("tempering scheme: lambda_N must be positive");
    return v;
  }

  /// lambda_N = lambda* / N.
  static TemperingScheme moderate(double lambda_star) {
    detail::require(lambda_star > 0.0 && std::isfinite(lambda_star), "moderate scheme: lambda* must be positive");
    return {[lambda_star](double N) { return lambda_star / N; }, lambda_star, "lambda_N = " + std::to_string(lambda_star) + "/N"};
  }
  /// lambda_N = N^{-c}: strong for c in (0, 1), weak for c > 1.
  static TemperingScheme power(double c) {
    detail::require(c > 0.0 && c != 1.0 && std::isfinite(c), "power scheme: exponent must be positive and not 1");
    const double star = c < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return {[c](double N) { return std::pow(N, -c); }, star, "lambda_N = N^-" + std::to_string(c)};
  }
  static TemperingScheme custom(std::function<double(double)> rule, double declared, std::string description) {
    return {std::move(rule), declared, std::move(description)};
  }
};

struct RegimeReport {
  Regime regime = Regime::moderate;
  double realized = 0.0;  // N lambda_N
};

/// Regime from the declared lambda*, after checking that N lambda_N trends toward it on N = 1e3..1e6.
inline RegimeReport classify_regime(const TemperingScheme& scheme, std::size_t N) {
  const double star = scheme.declared_lambda_star;
  detail::require(star >= 0.0, "tempering scheme: lambda* must be >= 0");
  const std::array<std::size_t, 4> probe{1000, 10000, 100000, 1000000};
  std::array<double, 4> v{}, lam{};
  for (std::size_t i = 0; i < probe.size(); ++i) {
    lam[i] = scheme.lambda(probe[i]);
    v[i] = lam[i] * static_cast<double>(probe[i]);
  }
  if (!(lam[3] < lam[0])) throw inconsistent_scheme("tempering scheme: lambda_N does not decrease toward 0");
  bool ok = true;
  if (std::isinf(star)) {
    for (int i = 0; i < 3; ++i) ok = ok && v[i + 1] > v[i];
  } else if (star == 0.0) {
    for (int i = 0; i < 3; ++i) ok = ok && v[i + 1] < v[i];
  } else {
    bool monotone = true;
    for (int i = 0; i < 3; ++i) monotone = monotone && std::abs(v[i + 1] - star) <= std::abs(v[i] - star);
    ok = monotone || std::abs(v[3] / star - 1.0) <= 0.01;
  }
  if (!ok) throw inconsistent_scheme("tempering scheme: N lambda_N does not trend toward the declared lambda* (" + scheme.description + ")");
  RegimeReport r;
  r.regime = std::isinf(star) ? Regime::strong : (star == 0.0 ? Regime::weak : Regime::moderate);
  r.realized = scheme.lambda(N) * static_cast<double>(N);
  return r;
}

/// Multiplier constant * N^{n_exponent} * lambda_N^{lambda_power} applied to S_N.
struct Normalization {
  double n_exponent = 0.0;
  double lambda_power = 0.0;
  double constant = 1.0;

  double factor(std::size_t N, double lambda_N) const {
    return constant * std::pow(static_cast<double>(N), n_exponent) * (lambda_power == 0.0 ? 1.0 : std::pow(lambda_N, lambda_power));
  }
};

/// Strong: N^{-1/alpha} lambda_N^d; weak and moderate: N^{-H}. The ARMA gain Theta(1)/Phi(1) is divided out.
inline Normalization regime_normalization(Regime r, double d, double alpha, const ArmaPolynomials& arma = {}) {
  Normalization n;
  n.constant = arma.phi_at_one() / arma.theta_at_one();
  if (r == Regime::strong) {
    n.n_exponent = -1.0 / alpha;
    n.lambda_power = d;
  } else {
    n.n_exponent = -(d + 1.0 / alpha);
  }
  return n;
}

/// S_N(t) = X(1) + ... + X([Nt]) on a grid in (0, 1].
inline std::vector<double> partial_sums(const std::vector<double>& x, const std::vector<double>& t_grid) {
  for (double t : t_grid) detail::require(t > 0.0 && t <= 1.0, "partial_sums: grid must lie in (0, 1]");
  const std::size_t N = x.size();
  std::vector<std::size_t> idx(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    idx[i] = std::min(N, static_cast<std::size_t>(std::floor(static_cast<double>(N) * t_grid[i] * (1.0 + 1e-12))));
  std::vector<double> out(t_grid.size(), 0.0);
  std::vector<std::size_t> order(t_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return idx[a] < idx[b]; });
  detail::compensated_sum s;
  std::size_t k = 0;
  for (std::size_t o : order) {
    while (k < idx[o]) s.add(x[k++]);
    out[o] = s.value();
  }
  return out;
}

inline std::vector<double> partial_sums(const SamplePath& path, const std::vector<double>& t_grid) {
  return partial_sums(path.values, t_grid);
}

struct NormalizedSums {
  std::vector<double> t_grid;
  std::vector<std::vector<double>> replicates;  // replicate x t
  Normalization normalization;
  Regime regime = Regime::moderate;
  std::size_t N = 0;
  double lambda_N = 0.0;
  double d = 0.0;
  double alpha = 2.0;
  double H = 0.5;
  std::uint64_t seed = 0;
  SimulationMethod method = SimulationMethod::truncated_ma;

  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(replicates.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = replicates[i][j];
    return c;
  }
  std::size_t index_of(double t) const {
    for (std::size_t j = 0; j < t_grid.size(); ++j)
      if (std::abs(t_grid[j] - t) < 1e-12) return j;
    throw invalid_parameter("normalized sums: t is not on the grid");
  }
};

struct McOptions {
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  std::uint64_t first_stream = 0;
  unsigned workers = 1;
  SimulationOptions sim;
};

/// Monte Carlo of the regime-normalized partial sums of ARTFIMA paths with lambda = lambda_N.
/// The lambda of `model` is ignored; replicate i uses RNG stream first_stream + i.
inline NormalizedSums normalized_sums_mc(ArtfimaModel model, const TemperingScheme& scheme, const InnovationLaw& law,
                                         std::size_t N, const std::vector<double>& t_grid, const McOptions& opt) {
  const auto rep = classify_regime(scheme, N);
  const double alpha = law.index();
  const double H = model.d + 1.0 / alpha;
  if (rep.regime == Regime::weak)
    detail::require(H > 0.0 && H < 1.0, "normalized_sums_mc: weak regime requires H = d + 1/alpha in (0, 1)");
  if (rep.regime == Regime::moderate) detail::require(H > 0.0, "normalized_sums_mc: moderate regime requires H > 0");
  detail::require(opt.replicates >= 1, "normalized_sums_mc: replicates must be positive");
  model.lambda = scheme.lambda(N);
  NormalizedSums ns;
  ns.t_grid = t_grid;
  ns.regime = rep.regime;
  ns.N = N;
  ns.lambda_N = model.lambda;
  ns.d = model.d;
  ns.alpha = alpha;
  ns.H = H;
  ns.seed = opt.seed;
  ns.normalization = regime_normalization(rep.regime, model.d, alpha, model.arma);
  const double f = ns.normalization.factor(N, model.lambda);
  ArtfimaSimulator sim(model, law, N, opt.sim);
  ns.method = sim.method();
  ns.replicates.assign(opt.replicates, {});
  parallel_for(opt.replicates, opt.workers, [&](std::size_t i) {
    RngStream rng(opt.seed, opt.first_stream + i);
    auto s = partial_sums(sim.simulate(rng).values, t_grid);
    for (auto& v : s) v *= f;
    ns.replicates[i] = std::move(s);
  });
  return ns;
}

/// Two-sample KS between the normalized sums at t (times Gamma(d+1) in the weak and moderate regimes)
/// and a sample of the limit process at t.
inline double ks_against_limit(const NormalizedSums& ns, double t, const std::vector<double>& limit_sample) {
  if (ns.replicates.size() < 1000 || limit_sample.size() < 1000)
    throw insufficient_replicates("ks_against_limit: both samples need at least 1000 values");
  auto x = ns.column(ns.index_of(t));
  if (ns.regime != Regime::strong) {
    const double g = gamma_fn(ns.d + 1.0);
    for (auto& v : x) v *= g;
  }
  return ks_two_sample(std::move(x), limit_sample);
}

/// Marginal samples at time t of the limit process of the regime: the stable Levy motion for strong tempering,
/// Z^{II}_{H,alpha,0} for weak and Z^{II}_{H,alpha,lambda*} for moderate. The noise M_alpha is the stable limit of
/// the innovation law. Gaussian limits use covariance factorization, stable ones kernel discretization.
inline std::vector<double> limit_marginal_sample(Regime regime, double d, double lambda_star, const InnovationLaw& law,
                                                 double t, const McOptions& opt, double mesh = 1.0 / 1024.0) {
  const StableParams sp = law.limit_params();
  std::vector<double> out(opt.replicates);
  if (regime == Regime::strong) {
    const StableParams st{sp.alpha, sp.sigma * std::pow(t, 1.0 / sp.alpha), sp.beta};
    parallel_for(opt.replicates, opt.workers, [&](std::size_t i) {
      RngStream rng(opt.seed, opt.first_stream + i);
      out[i] = stable_draw(st, rng);
    });
    return out;
  }
  const KernelParams k{d + 1.0 / sp.alpha, sp.alpha, regime == Regime::weak ? 0.0 : lambda_star};
  LimitOptions lo;
  lo.sigma = sp.sigma;
  lo.beta = sp.beta;
  lo.mesh = mesh;
  const auto scheme = sp.alpha == 2.0 ? LimitScheme::covariance_factorization : LimitScheme::kernel_discretization;
  LimitSimulator sim(k, {t}, scheme, lo);
  parallel_for(opt.replicates, opt.workers, [&](std::size_t i) {
    RngStream rng(opt.seed, opt.first_stream + i);
    out[i] = sim.sample(rng).values[0];
  });
  return out;
}

/// Variance at t of the limit of the normalized sums for Gaussian innovations of variance v. The weak and
/// moderate limits are Gamma(d+1)^{-1} Z with Z = Gamma(H+1/2) B^{II}, so the gamma factors cancel at alpha = 2.
inline double limit_variance(Regime regime, double d, double lambda_star, double t, double v = 1.0) {
  if (regime == Regime::strong) return v * t;
  const double H = d + 0.5;
  return v * tfbm2_variance(H, regime == Regime::weak ? 0.0 : lambda_star, t);
}

/// Weight functions of the partial sum S_N(t) = sum_j g_N(j) zeta(j) in rescaled form, and their limit.
struct WeightFunctionPair {
  std::function<double(double)> g_tilde;  // x -> N^{1/alpha} g_N([xN]), constant on cells of width 1/N
  std::function<double(double)> g_limit;
  double p = 2.0;
  double alpha = 2.0;
  std::size_t N = 1;
  double lower = -1.0;  // integration range [lower, 1]

  void validate() const {
    if (alpha == 2.0)
      detail::require(p == 2.0, "weight pair: p must be 2 when alpha = 2");
    else
      detail::require(p >= 1.0 && p < alpha, "weight pair: p must lie in [1, alpha)");
    detail::require(N >= 1 && lower < 0.0, "weight pair: invalid range");
  }
};

/// Weight pair for fractional-noise-type ARTFIMA under the given scheme at time t.
inline WeightFunctionPair make_weight_pair(ArtfimaModel model, const TemperingScheme& scheme, double alpha, std::size_t N,
                                           double t, double p = 0.0) {
  const auto rep = classify_regime(scheme, N);
  model.lambda = scheme.lambda(N);
  const double d = model.d, H = d + 1.0 / alpha;
  const auto norm = regime_normalization(rep.regime, d, alpha, model.arma);
  const double lam_limit = rep.regime == Regime::moderate ? scheme.declared_lambda_star
                           : rep.regime == Regime::weak   ? 0.0
                                                          : rep.realized;
  const double Y = detail::left_tail_cutoff(KernelParams{std::max(H, 1e-3), alpha, lam_limit == 0.0 ? rep.realized : lam_limit}, t);
  const double cells = Y * static_cast<double>(N);
  if (cells > 5e7) throw invalid_parameter("weighted_sum_gap: tail range needs more than 5e7 cells");
  const std::size_t J = static_cast<std::size_t>(std::ceil(cells)), n = static_cast<std::size_t>(std::floor(N * t * (1 + 1e-12)));
  const auto a = artfima_coeffs(model, n + J + 1).values;
  auto A = std::make_shared<std::vector<double>>(a.size());
  detail::compensated_sum s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s.add(a[i]);
    (*A)[i] = s.value();
  }
  // N^{1/alpha} times the normalization, applied to sum_{k=1}^{n} a(k - j)
  const double scale = norm.factor(N, model.lambda) * std::pow(static_cast<double>(N), 1.0 / alpha);
  WeightFunctionPair w;
  w.alpha = alpha;
  w.p = p > 0.0 ? p : (alpha == 2.0 ? 2.0 : 1.0);
  w.N = N;
  w.lower = -Y;
  const double Nd = static_cast<double>(N);
  w.g_tilde = [A, n, scale, Nd](double x) {
    const long j = static_cast<long>(std::floor(x * Nd));
    auto cum = [&](long m) { return m < 0 ? 0.0 : (*A)[static_cast<std::size_t>(m)]; };
    if (j > static_cast<long>(n)) return 0.0;
    return scale * (cum(static_cast<long>(n) - j) - cum(-j));
  };
  if (rep.regime == Regime::strong) {
    w.g_limit = [t](double x) { return (x >= 0.0 && x < t) ? 1.0 : 0.0; };
  } else {
    const KernelParams k{H, alpha, lam_limit};
    const double g = 1.0 / gamma_fn(1.0 + d);
    w.g_limit = [k, g, t](double x) {
      if (x >= t) return 0.0;
      return g * detail::kernel_from_offsets(k.power(), k.lambda, t, std::max(-x, 0.0), t - x);
    };
  }
  w.validate();
  return w;
}

/// L^p distance between g_tilde and g_limit on [lower, 1], 8-point Gauss-Legendre on each cell of width 1/N.
inline double weighted_sum_gap(const WeightFunctionPair& w) {
  w.validate();
  const double h = 1.0 / static_cast<double>(w.N);
  const long j0 = static_cast<long>(std::floor(w.lower / h)), j1 = static_cast<long>(w.N);
  detail::compensated_sum s;
  for (long j = j0; j < j1; ++j) {
    const double a = std::max(w.lower, j * h), b = std::min(1.0, (j + 1) * h);
    if (b <= a) continue;
    auto f = [&](double x) { return std::pow(std::abs(w.g_tilde(x) - w.g_limit(x)), w.p); };
    s.add(boost::math::quadrature::gauss<double, 8>::integrate(f, a, b));
  }
  const double v = std::pow(s.value(), 1.0 / w.p);
  if (!std::isfinite(v)) throw convergence_error("weighted_sum_gap: non-finite quadrature");
  return v;
}

}  // namespace artfima
