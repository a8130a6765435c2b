#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "artfima/coefficients.hpp"
#include "artfima/errors.hpp"
#include "artfima/innovations.hpp"
#include "artfima/invariance.hpp"
#include "artfima/parallel.hpp"
#include "artfima/process.hpp"
#include "artfima/rng.hpp"
#include "artfima/specialfn.hpp"
#include "artfima/stats.hpp"
#include "artfima/tfm.hpp"

namespace artfima {

/// OLS fit of Y(t) = beta Y(t-1) + X(t) with Y(0) = 0, and the decomposition beta - 1 = A - B.
struct UnitRootRun {
  double beta_hat = 0.0;
  double a_hat = 0.0;  // Y(N)^2 / (2 sum Y(t-1)^2)
  double b_hat = 0.0;  // sum X(t)^2 / (2 sum Y(t-1)^2)
  std::size_t N = 0;
  double normalization = 1.0;
  double sum_y2 = 0.0;  // sum_{t=1}^{N} Y(t-1)^2
  double y_end = 0.0;   // Y(N)
  double sum_x2 = 0.0;
  std::string error_model;

  double statistic() const { return normalization * (beta_hat - 1.0); }

  /// |(beta - 1) - (A - B)| in units of the rounding scale eps (|beta| + A + B).
  double identity_residual() const {
    const double scale = std::numeric_limits<double>::epsilon() * (std::abs(beta_hat) + a_hat + b_hat);
    return std::abs((beta_hat - 1.0) - (a_hat - b_hat)) / scale;
  }
};

namespace detail {

inline UnitRootRun ols_core(const std::vector<double>& y, const std::vector<double>& x) {
  const std::size_t N = y.size();
  if (N < 2) throw invalid_parameter("ols_beta: need N >= 2");
  compensated_sum num, den, x2;
  double prev = 0.0;
  for (std::size_t t = 0; t < N; ++t) {
    num.add(y[t] * prev);
    den.add(prev * prev);
    x2.add(x[t] * x[t]);
    prev = y[t];
  }
  if (!(den.value() > 0.0)) throw degenerate_sample("ols_beta: all Y(t-1) are zero");
  UnitRootRun r;
  r.N = N;
  r.sum_y2 = den.value();
  r.sum_x2 = x2.value();
  r.y_end = y[N - 1];
  r.beta_hat = num.value() / r.sum_y2;
  r.a_hat = r.y_end * r.y_end / (2.0 * r.sum_y2);
  r.b_hat = r.sum_x2 / (2.0 * r.sum_y2);
  return r;
}

}  // namespace detail

/// OLS slope from Y(1..N) (Y(0) = 0 implicit); X(t) = Y(t) - Y(t-1).
inline UnitRootRun ols_beta(const std::vector<double>& y) {
  std::vector<double> x(y.size());
  double prev = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    x[t] = y[t] - prev;
    prev = y[t];
  }
  return detail::ols_core(y, x);
}

/// OLS slope for the random walk Y built by cumulating the errors X(1..N).
inline UnitRootRun ols_beta_from_errors(const std::vector<double>& x) {
  std::vector<double> y(x.size());
  double s = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) y[t] = s += x[t];
  return detail::ols_core(y, x);
}

/// beta rebuilt from S_N(1)^2, int_0^1 S_N(s)^2 ds = N^{-1} sum Y(t-1)^2, and sum X^2.
inline double beta_from_functionals(double endpoint_sq, double integral_sq, double sum_x2, std::size_t N) {
  return 1.0 + (endpoint_sq - sum_x2) / (2.0 * static_cast<double>(N) * integral_sq);
}

/// Normalizing factor of beta - 1: min(1, lambda_N^{-2d}) N for strong tempering, N^{min(1, 1+2d)} otherwise.
inline double unit_root_normalization(Regime r, double d, double lambda_N, std::size_t N) {
  const double n = static_cast<double>(N);
  if (r == Regime::strong) return std::min(1.0, std::pow(lambda_N, -2.0 * d)) * n;
  return std::pow(n, std::min(1.0, 1.0 + 2.0 * d));
}

// ---------------------------------------------------------------- quadratic variation

/// Factor applied to sum X(t)^2: 1/N for d < 1/2, lambda_N^{2d-1}/N for d > 1/2, 1/(N |log lambda_N|) at d = 1/2.
inline double x2_normalization(double d, double lambda_N, std::size_t N) {
  const double n = static_cast<double>(N);
  if (d < 0.5) return 1.0 / n;
  if (d > 0.5) return std::pow(lambda_N, 2.0 * d - 1.0) / n;
  return 1.0 / (n * std::abs(std::log(lambda_N)));
}

/// Limit of the normalized sum of squares for fractional noise with unit innovation variance.
inline double x2_limit_constant(double d) {
  if (d < 0.5) {
    const double g = gamma_fn(1.0 - d);
    return gamma_fn(1.0 - 2.0 * d) / (g * g);
  }
  if (d > 0.5) return gamma_fn(d - 0.5) / (2.0 * std::sqrt(std::numbers::pi) * gamma_fn(d));
  return 1.0 / std::numbers::pi;
}

inline void require_finite_fourth_moment(const InnovationLaw& law) {
  if (!law.finite_variance())
    throw invalid_parameter("unit root: innovations need a finite fourth moment (Gaussian law)");
}

/// Monte Carlo of the normalized sum of squares of ARTFIMA paths with lambda = lambda_N.
inline McSummary x2_sums(ArtfimaModel model, const InnovationLaw& law, const TemperingScheme& scheme, std::size_t N,
                         const McOptions& opt) {
  require_finite_fourth_moment(law);
  classify_regime(scheme, N);
  model.lambda = scheme.lambda(N);
  const double f = x2_normalization(model.d, model.lambda, N);
  ArtfimaSimulator sim(model, law, N, opt.sim);
  std::vector<double> out(opt.replicates);
  parallel_for(opt.replicates, opt.workers, [&](std::size_t i) {
    RngStream rng(opt.seed, opt.first_stream + i);
    const auto p = sim.simulate(rng);
    detail::compensated_sum s;
    for (double v : p.values) s.add(v * v);
    out[i] = f * s.value();
  });
  auto summary = McSummary::from_sample(std::move(out), opt.seed);
  summary.first_stream = opt.first_stream;
  summary.extra["lambda_N"] = model.lambda;
  summary.extra["normalization"] = f;
  if (model.is_fractional_noise()) summary.extra["limit_constant"] = x2_limit_constant(model.d);
  return summary;
}

// ---------------------------------------------------------------- limit families

enum class LimitPath { brownian, fbm, tfbm2 };
enum class Numerator { endpoint_squared, endpoint_squared_minus_one, negative_constant };

inline const char* to_string(LimitPath p) {
  switch (p) {
    case LimitPath::brownian: return "B";
    case LimitPath::fbm: return "B_H";
    case LimitPath::tfbm2: return "B^II_H,lambda";
  }
  return "?";
}

inline const char* to_string(Numerator n) {
  switch (n) {
    case Numerator::endpoint_squared: return "P(1)^2";
    case Numerator::endpoint_squared_minus_one: return "P(1)^2-1";
    case Numerator::negative_constant: return "-c";
  }
  return "?";
}

/// Limit law of the normalized unit-root statistic: numerator / (2 int_0^1 P(s)^2 ds) for a Gaussian path P.
struct LimitFamily {
  Regime regime = Regime::weak;
  double d = 0.0;
  double lambda_star = 0.0;
  double H = 0.5;
  LimitPath path = LimitPath::brownian;
  Numerator numerator = Numerator::endpoint_squared_minus_one;
  double constant = 0.0;  // c of the negative-constant numerator
  std::vector<std::string> notes;

  static LimitFamily select(Regime regime, double d, double lambda_star = 0.0) {
    detail::require(std::isfinite(d) && d > -1.0, "limit family: d must be finite and > -1");
    LimitFamily f;
    f.regime = regime;
    f.d = d;
    f.H = d + 0.5;
    const double H = f.H;
    switch (regime) {
      case Regime::strong:
        f.path = LimitPath::brownian;
        if (d > 0.0) {
          f.numerator = Numerator::endpoint_squared;
        } else if (d == 0.0) {
          f.numerator = Numerator::endpoint_squared_minus_one;
        } else {
          f.numerator = Numerator::negative_constant;
          const double g = gamma_fn(1.0 - d);
          f.constant = gamma_fn(1.0 - 2.0 * d) / (g * g);
        }
        if (d >= 0.5) f.notes.push_back("strong tempering with d >= 1/2 is outside the explicitly covered range");
        break;
      case Regime::weak:
        detail::require(H > 0.0 && H < 1.0, "limit family: weak tempering requires H = d + 1/2 in (0, 1)");
        f.path = d == 0.0 ? LimitPath::brownian : LimitPath::fbm;
        if (H > 0.5) {
          f.numerator = Numerator::endpoint_squared;
        } else if (d == 0.0) {
          f.numerator = Numerator::endpoint_squared_minus_one;
        } else {
          f.numerator = Numerator::negative_constant;
          f.constant = H * gamma_fn(H + 0.5) / gamma_fn(1.5 - H);
        }
        break;
      case Regime::moderate:
        detail::require(lambda_star > 0.0 && std::isfinite(lambda_star), "limit family: moderate tempering needs lambda* > 0");
        detail::require(H > 0.0, "limit family: moderate tempering requires H > 0");
        f.lambda_star = lambda_star;
        f.path = d == 0.0 ? LimitPath::brownian : LimitPath::tfbm2;
        if (H > 0.5) {
          f.numerator = Numerator::endpoint_squared;
        } else if (d == 0.0) {
          f.numerator = Numerator::endpoint_squared_minus_one;
        } else {
          f.numerator = Numerator::negative_constant;
          const double g = gamma_fn(1.5 - H);
          f.constant = gamma_fn(2.0 * (1.0 - H)) / (g * g);
        }
        break;
    }
    return f;
  }

  std::string describe() const {
    std::string s = std::string(to_string(regime)) + ": (" + to_string(numerator) + ")/(2 int P^2), P = " + to_string(path);
    if (numerator == Numerator::negative_constant) s += ", c = " + std::to_string(constant);
    return s;
  }
};

struct LimitFamilySample {
  std::vector<double> values;  // mesh h, replicate order
  std::vector<double> coarse;  // same paths on mesh 2h
  double mesh = 0.0;
  bool circulant = true;
};

/// Samples of the limit functional; integrals by the trapezoid rule on the mesh and on twice the mesh.
inline LimitFamilySample simulate_limit_family_sample(const LimitFamily& f, std::size_t replicates, double mesh,
                                                      std::uint64_t seed, std::uint64_t first_stream = 0,
                                                      unsigned workers = 1) {
  detail::require(mesh > 0.0 && mesh <= 1.0 / 512.0, "limit family: mesh must be at most 1/512");
  const double nd = std::round(1.0 / mesh);
  detail::require(std::abs(nd * mesh - 1.0) < 1e-9 && static_cast<std::size_t>(nd) % 2 == 0,
                  "limit family: 1/mesh must be an even integer");
  const std::size_t n = static_cast<std::size_t>(nd);
  const double h = 1.0 / nd;
  std::shared_ptr<StationaryIncrementSampler> sampler;
  if (f.path == LimitPath::fbm) sampler = std::make_shared<StationaryIncrementSampler>(fbm_increment_acv(f.H, h), n);
  if (f.path == LimitPath::tfbm2)
    sampler = std::make_shared<StationaryIncrementSampler>(tfbm2_increment_acv(f.H, f.lambda_star, h, workers), n);
  LimitFamilySample out;
  out.mesh = h;
  out.circulant = !sampler || sampler->circulant();
  out.values.resize(replicates);
  out.coarse.resize(replicates);
  auto functional = [&](double end_sq, double integral) {
    switch (f.numerator) {
      case Numerator::endpoint_squared: return end_sq / (2.0 * integral);
      case Numerator::endpoint_squared_minus_one: return (end_sq - 1.0) / (2.0 * integral);
      case Numerator::negative_constant: return -f.constant / (2.0 * integral);
    }
    return 0.0;
  };
  parallel_for(replicates, workers, [&](std::size_t i) {
    RngStream rng(seed, first_stream + i);
    std::vector<double> p;
    if (sampler) {
      p = sampler->sample(rng);
    } else {
      p.assign(n + 1, 0.0);
      const double sd = std::sqrt(h);
      for (std::size_t k = 0; k < n; ++k) p[k + 1] = p[k] + sd * rng.normal();
    }
    detail::compensated_sum fine, coarse;
    for (std::size_t k = 1; k < n; ++k) {
      fine.add(p[k] * p[k]);
      if (k % 2 == 0) coarse.add(p[k] * p[k]);
    }
    const double end_sq = p[n] * p[n];
    fine.add(0.5 * end_sq);
    coarse.add(0.5 * end_sq);
    out.values[i] = functional(end_sq, h * fine.value());
    out.coarse[i] = functional(end_sq, 2.0 * h * coarse.value());
  });
  return out;
}

inline McSummary simulate_limit_family(const LimitFamily& f, std::size_t replicates, double mesh, std::uint64_t seed,
                                       std::uint64_t first_stream = 0, unsigned workers = 1) {
  auto s = simulate_limit_family_sample(f, replicates, mesh, seed, first_stream, workers);
  auto summary = McSummary::from_sample(s.values, seed);
  summary.first_stream = first_stream;
  summary.extra["mesh"] = s.mesh;
  summary.extra["median_coarse_mesh"] = quantile(s.coarse, 0.5);
  summary.extra["mesh_check_gap"] = std::abs(summary.quantiles.at(0.5) - summary.extra["median_coarse_mesh"]);
  if (replicates >= 2) summary.ks["coarse_mesh"] = ks_two_sample(s.values, s.coarse);
  return summary;
}

/// Monte Carlo of the normalized unit-root statistic with ARTFIMA(lambda_N) errors. extra["identity_max_residual"]
/// records the largest |(beta - 1) - (A - B)| in rounding units.
inline McSummary mc_unit_root(ArtfimaModel model, const InnovationLaw& law, const TemperingScheme& scheme, std::size_t N,
                              const McOptions& opt) {
  require_finite_fourth_moment(law);
  const auto rep = classify_regime(scheme, N);
  model.lambda = scheme.lambda(N);
  const double norm = unit_root_normalization(rep.regime, model.d, model.lambda, N);
  ArtfimaSimulator sim(model, law, N, opt.sim);
  std::vector<double> out(opt.replicates), resid(opt.replicates);
  parallel_for(opt.replicates, opt.workers, [&](std::size_t i) {
    RngStream rng(opt.seed, opt.first_stream + i);
    auto run = ols_beta_from_errors(sim.simulate(rng).values);
    run.normalization = norm;
    out[i] = run.statistic();
    resid[i] = run.identity_residual();
  });
  auto summary = McSummary::from_sample(std::move(out), opt.seed);
  summary.first_stream = opt.first_stream;
  summary.extra["lambda_N"] = model.lambda;
  summary.extra["normalization"] = norm;
  summary.extra["identity_max_residual"] = *std::max_element(resid.begin(), resid.end());
  return summary;
}

// ---------------------------------------------------------------- critical values

struct CriticalValue {
  double level = 0.0;
  double quantile = 0.0;
  double mc_se = 0.0;
};

/// Empirical quantiles of a sample in replicate order, with standard errors from 20 contiguous blocks.
inline std::vector<CriticalValue> critical_values(const std::vector<double>& sample, const std::vector<double>& levels,
                                                  std::size_t min_replicates = 100000) {
  if (sample.size() < min_replicates)
    throw insufficient_replicates("critical_values: need at least " + std::to_string(min_replicates) + " replicates, got " +
                                  std::to_string(sample.size()));
  for (double p : levels) detail::require(p > 0.0 && p < 1.0, "critical_values: levels must lie in (0, 1)");
  constexpr std::size_t blocks = 20;
  std::vector<double> sorted = sample;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::vector<double>> block_sorted(blocks);
  const std::size_t bs = sample.size() / blocks;
  for (std::size_t b = 0; b < blocks; ++b) {
    block_sorted[b].assign(sample.begin() + b * bs, sample.begin() + (b + 1) * bs);
    std::sort(block_sorted[b].begin(), block_sorted[b].end());
  }
  std::vector<CriticalValue> out;
  for (double p : levels) {
    std::vector<double> q(blocks);
    for (std::size_t b = 0; b < blocks; ++b) q[b] = quantile_sorted(block_sorted[b], p);
    out.push_back({p, quantile_sorted(sorted, p), std::sqrt(variance(q) / blocks)});
  }
  return out;
}

inline std::vector<CriticalValue> critical_values(const LimitFamily& f, const std::vector<double>& levels,
                                                  std::size_t replicates, double mesh, std::uint64_t seed,
                                                  unsigned workers = 1) {
  if (replicates < 100000) throw insufficient_replicates("critical_values: need at least 100000 replicates");
  return critical_values(simulate_limit_family_sample(f, replicates, mesh, seed, 0, workers).values, levels);
}

}  // namespace artfima
