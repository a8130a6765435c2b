#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "artfima/coefficients.hpp"
#include "artfima/invariance.hpp"
#include "artfima/io.hpp"
#include "artfima/parallel.hpp"
#include "artfima/process.hpp"
#include "artfima/quadrature.hpp"
#include "artfima/stats.hpp"
#include "artfima/tfm.hpp"
#include "artfima/unitroot.hpp"

namespace artfima::acceptance {

/// One measured quantity against its bound; pass means measured <= bound.
struct Check {
  std::string what;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  std::string error;  // set when the computation itself threw
  double seconds = 0.0;

  bool passed() const {
    if (!error.empty() || checks.empty()) return false;
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct SuiteOptions {
  unsigned workers = default_workers();
  std::uint64_t seed = 20240917;
};

namespace detail {

inline void check_le(CriterionResult& r, std::string what, double measured, double bound) {
  r.checks.push_back({std::move(what), measured, bound, std::isfinite(measured) && measured <= bound});
}

inline double rel(double a, double b) { return std::abs(a / b - 1.0); }

inline ArtfimaModel fn(double d, double lambda = 0.0) {
  ArtfimaModel m;
  m.d = d;
  m.lambda = lambda;
  return m;
}

inline ArtfimaModel arma11(double d, double lambda) {
  ArtfimaModel m = fn(d, lambda);
  m.arma.phi = {0.5};
  m.arma.theta = {0.3};
  return m;
}

inline McOptions mc(const SuiteOptions& o, std::size_t replicates, std::uint64_t stream_base) {
  McOptions m;
  m.replicates = replicates;
  m.seed = o.seed;
  m.first_stream = stream_base;
  m.workers = o.workers;
  return m;
}

}  // namespace detail

inline CriterionResult c1_generating_function() {
  CriterionResult r{1, "generating function of omega at z = exp(-0.1)"};
  const auto v = omega_coeffs(0.3, 10000).values;
  artfima::detail::compensated_sum s;
  for (std::size_t k = 0; k < v.size(); ++k) s.add(std::exp(-0.1 * static_cast<double>(k)) * v[k]);
  detail::check_le(r, "relative error", detail::rel(s.value(), std::pow(-std::expm1(-0.1), -0.3)), 1e-6);
  return r;
}

inline CriterionResult c2_covariance_closed_form() {
  CriterionResult r{2, "2F1 autocovariance vs direct coefficient sum, d = 0.3, lambda = 0.1"};
  for (long k : {0L, 1L, 5L, 50L}) {
    const double cf = autocovariance(0.3, 0.1, k);
    const double bf = autocovariance_bruteforce(detail::fn(0.3, 0.1), k, 100000);
    detail::check_le(r, "k = " + std::to_string(k) + " relative error", detail::rel(cf, bf), 1e-9);
  }
  return r;
}

inline CriterionResult c3_covariance_sum() {
  CriterionResult r{3, "two-sided autocovariance sum, d = 0.3, lambda = 0.05"};
  artfima::detail::compensated_sum s;
  s.add(autocovariance(0.3, 0.05, 0));
  for (long k = 1; k <= 2000; ++k) s.add(2.0 * autocovariance(0.3, 0.05, k));
  detail::check_le(r, "relative error", detail::rel(s.value(), std::pow(-std::expm1(-0.05), -0.6)), 1e-6);
  return r;
}

inline CriterionResult c4_spectral_duality() {
  CriterionResult r{4, "spectral duality for fractional noise and ARMA(1,1), d = 0.3, lambda = 0.1"};
  const auto f = detail::fn(0.3, 0.1);
  const auto a = detail::arma11(0.3, 0.1);
  double worst_fn = 0.0, worst_arma = 0.0;
  for (long k = 0; k <= 10; ++k) {
    auto integrand = [&](const ArtfimaModel& m) {
      return 2.0 * quad::smooth([&](double x) { return std::cos(static_cast<double>(k) * x) * spectral_density(m, x); }, 0.0,
                                std::numbers::pi, 1e-14);
    };
    worst_fn = std::max(worst_fn, std::abs(integrand(f) - autocovariance(0.3, 0.1, k)));
    const double bf = autocovariance_bruteforce(a, k, 20000);
    worst_arma = std::max(worst_arma, std::abs(integrand(a) - bf));
  }
  detail::check_le(r, "fractional noise max |gap|, k <= 10", worst_fn, 1e-7);
  detail::check_le(r, "ARMA(1,1) max |gap|, k <= 10", worst_arma, 1e-7);
  return r;
}

inline CriterionResult c5_coefficient_asymptotics() {
  CriterionResult r{5, "coefficient asymptotics at k = 1e4, ARMA(1,1) phi = 0.5, theta = 0.3"};
  for (double d : {-0.4, 0.25, 0.75}) {
    const auto m = detail::arma11(d, 0.0);
    const auto v = artfima_coeffs(m, 10000).values;
    const double ratio = v[10000] * m.arma.phi_at_one() * gamma_fn(d) / (m.arma.theta_at_one() * std::pow(1e4, d - 1.0));
    char buf[64];
    std::snprintf(buf, sizeof buf, "d = %g |ratio - 1|", d);
    detail::check_le(r, buf, std::abs(ratio - 1.0), 0.02);
  }
  return r;
}

inline CriterionResult c6_kernel_representations() {
  CriterionResult r{6, "kernel: three-term form vs single-integral form on 100-point grids"};
  for (const KernelParams k : {KernelParams{0.8, 2.0, 1.0}, KernelParams{0.3, 2.0, 1.0}, KernelParams{0.9, 1.5, 1.0}}) {
    double worst = 0.0;
    for (double t : {0.5, 1.0}) {
      for (int i = 0; i < 100; ++i) {
        const double y = -2.0 + 3.0 * (i + 0.5) / 100.0;
        worst = std::max(worst, std::abs(kernel_h(k, t, y) - kernel_h_integral(k, t, y)));
      }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "(H, alpha, lambda) = (%g, %g, %g) max gap", k.H, k.alpha, k.lambda);
    detail::check_le(r, buf, worst, 1e-8);
  }
  return r;
}

inline CriterionResult c7_tfbm_specials() {
  CriterionResult r{7, "TFBM II: untempered covariance and scaling"};
  double worst = 0.0;
  for (double H : {0.3, 0.7}) {
    const double c2 = tfbm2_fbm_constant(H);
    for (double s : {0.25, 0.5, 1.0})
      for (double t : {0.5, 1.0}) {
        const double ref = c2 * fbm_covariance(H, s, t);
        worst = std::max(worst, std::abs(tfbm2_covariance(H, 0.0, s, t) - ref) / std::max(1.0, std::abs(ref)));
      }
  }
  detail::check_le(r, "lambda = 0 vs C1^2 FBM covariance", worst, 1e-6);
  double worst_scaling = 0.0;
  for (double H : {0.3, 0.7}) {
    const double b = 2.0, lam = 1.0, t = 0.4;
    worst_scaling = std::max(worst_scaling, std::abs(tfbm2_variance(H, lam, b * t) - std::pow(b, 2 * H) * tfbm2_variance(H, b * lam, t)));
  }
  detail::check_le(r, "scaling Var B(bt) = b^{2H} Var B_{b lambda}(t), b = 2", worst_scaling, 1e-6);
  return r;
}

inline CriterionResult c8_moderate_invariance(const SuiteOptions& o) {
  CriterionResult r{8, "partial sums, moderate tempering, d = 0.3, lambda* = 1, N = 1e4"};
  const auto ns = normalized_sums_mc(detail::fn(0.3), TemperingScheme::moderate(1.0), InnovationLaw::gaussian(1.0), 10000, {1.0},
                                     detail::mc(o, 4000, 8'000'000));
  const double target = limit_variance(Regime::moderate, 0.3, 1.0, 1.0);
  detail::check_le(r, "variance relative error", detail::rel(variance(ns.column(0)), target), 0.05);
  const auto z = limit_marginal_sample(Regime::moderate, 0.3, 1.0, InnovationLaw::gaussian(1.0), 1.0, detail::mc(o, 4000, 8'100'000));
  detail::check_le(r, "KS vs limit marginal", ks_against_limit(ns, 1.0, z), 0.05 + 0.02);
  return r;
}

inline CriterionResult c9_strong_weak_invariance(const SuiteOptions& o) {
  CriterionResult r{9, "partial sums, strong (N^-1/2) and weak (N^-2) tempering, d = 0.3, N = 1e4"};
  const auto s = normalized_sums_mc(detail::fn(0.3), TemperingScheme::power(0.5), InnovationLaw::gaussian(1.0), 10000, {1.0},
                                    detail::mc(o, 4000, 9'000'000));
  detail::check_le(r, "strong: variance relative error vs t = 1", std::abs(variance(s.column(0)) - 1.0), 0.05);
  const auto w = normalized_sums_mc(detail::fn(0.3), TemperingScheme::power(2.0), InnovationLaw::gaussian(1.0), 10000, {1.0},
                                    detail::mc(o, 4000, 9'100'000));
  const auto z = limit_marginal_sample(Regime::weak, 0.3, 0.0, InnovationLaw::gaussian(1.0), 1.0, detail::mc(o, 4000, 9'200'000));
  detail::check_le(r, "weak: KS vs scaled FBM marginal", ks_against_limit(w, 1.0, z), 0.07);
  return r;
}

inline CriterionResult c10_quadratic_variation(const SuiteOptions& o) {
  CriterionResult r{10, "normalized sums of squares, N = 1e5, 200 replicates"};
  struct Case {
    double d;
    TemperingScheme scheme;
    double tol;
    const char* label;
  };
  const Case cases[] = {{0.2, TemperingScheme::moderate(1.0), 0.03, "d = 0.2, lambda_N = 1/N"},
                        {0.8, TemperingScheme::power(0.5), 0.05, "d = 0.8, lambda_N = N^-1/2"},
                        {0.5, TemperingScheme::moderate(1.0), 0.05, "d = 0.5, lambda_N = 1/N, log normalization"}};
  std::uint64_t base = 10'000'000;
  for (const auto& c : cases) {
    const auto s = x2_sums(detail::fn(c.d), InnovationLaw::gaussian(1.0), c.scheme, 100000, detail::mc(o, 200, base));
    base += 100'000;
    detail::check_le(r, std::string(c.label) + ": relative error of mean", detail::rel(s.extra.at("mean"), x2_limit_constant(c.d)), c.tol);
  }
  return r;
}

inline CriterionResult c11_dickey_fuller(const SuiteOptions& o) {
  CriterionResult r{11, "unit root, Dickey-Fuller anchor: weak tempering, d = 0, N = 1e4"};
  const auto fin = mc_unit_root(detail::fn(0.0), InnovationLaw::gaussian(1.0), TemperingScheme::power(2.0), 10000,
                                detail::mc(o, 20000, 11'000'000));
  const auto lim = simulate_limit_family(LimitFamily::select(Regime::weak, 0.0), 100000, 1.0 / 1024, o.seed, 11'100'000, o.workers);
  detail::check_le(r, "|q05 finite - q05 limit|", std::abs(fin.quantiles.at(0.05) - lim.quantiles.at(0.05)), 0.3);
  detail::check_le(r, "|q05 limit - (-8.1)|", std::abs(lim.quantiles.at(0.05) + 8.1), 0.3);
  detail::check_le(r, "KS finite vs limit", ks_two_sample(fin.sorted, lim.sorted), 0.05);
  return r;
}

inline CriterionResult c12_tempered_unit_root(const SuiteOptions& o) {
  CriterionResult r{12, "unit root, tempered families, N = 1e4"};
  const auto fin = mc_unit_root(detail::fn(0.3), InnovationLaw::gaussian(1.0), TemperingScheme::moderate(1.0), 10000,
                                detail::mc(o, 4000, 12'000'000));
  const auto lim = simulate_limit_family(LimitFamily::select(Regime::moderate, 0.3, 1.0), 20000, 1.0 / 1024, o.seed, 12'100'000, o.workers);
  detail::check_le(r, "moderate d = 0.3, lambda* = 1: KS finite vs limit", ks_two_sample(fin.sorted, lim.sorted), 0.06);
  const auto sf = mc_unit_root(detail::fn(-0.4), InnovationLaw::gaussian(1.0), TemperingScheme::power(0.5), 10000,
                               detail::mc(o, 4000, 12'200'000));
  const auto sl = simulate_limit_family(LimitFamily::select(Regime::strong, -0.4), 20000, 1.0 / 1024, o.seed, 12'300'000, o.workers);
  detail::check_le(r, "strong d = -0.4: median relative error", detail::rel(sf.quantiles.at(0.5), sl.quantiles.at(0.5)), 0.10);
  return r;
}

/// CSV rendering of a summary, used for the byte-exact determinism check.
inline std::string summary_csv(const McSummary& s) {
  io::CsvTable t({"index", "value"});
  for (std::size_t i = 0; i < s.sorted.size(); ++i) t.add(i, s.sorted[i]);
  return t.str();
}

inline CriterionResult c13_exact_identities(const SuiteOptions& o) {
  CriterionResult r{13, "exact identities: OLS decomposition and worker-count determinism"};
  auto opt = detail::mc(o, 400, 13'000'000);
  opt.workers = 1;
  const auto a = mc_unit_root(detail::fn(0.3), InnovationLaw::gaussian(1.0), TemperingScheme::moderate(1.0), 10000, opt);
  detail::check_le(r, "max |(beta-1) - (A-B)| in units of eps(|beta|+A+B)", a.extra.at("identity_max_residual"), 8.0);
  opt.workers = 4;
  const auto b = mc_unit_root(detail::fn(0.3), InnovationLaw::gaussian(1.0), TemperingScheme::moderate(1.0), 10000, opt);
  detail::check_le(r, "unit-root CSV differs between 1 and 4 workers", summary_csv(a) == summary_csv(b) ? 0.0 : 1.0, 0.0);
  auto nopt = detail::mc(o, 200, 13'100'000);
  nopt.workers = 1;
  const auto n1 = normalized_sums_mc(detail::fn(0.3), TemperingScheme::power(0.5), InnovationLaw::gaussian(1.0), 5000, {0.5, 1.0}, nopt);
  nopt.workers = 4;
  const auto n4 = normalized_sums_mc(detail::fn(0.3), TemperingScheme::power(0.5), InnovationLaw::gaussian(1.0), 5000, {0.5, 1.0}, nopt);
  detail::check_le(r, "partial sums differ between 1 and 4 workers", n1.replicates == n4.replicates ? 0.0 : 1.0, 0.0);
  return r;
}

/// Runs one criterion, capturing exceptions and wall time.
inline CriterionResult run_criterion(int id, const SuiteOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = c1_generating_function(); break;
      case 2: r = c2_covariance_closed_form(); break;
      case 3: r = c3_covariance_sum(); break;
      case 4: r = c4_spectral_duality(); break;
      case 5: r = c5_coefficient_asymptotics(); break;
      case 6: r = c6_kernel_representations(); break;
      case 7: r = c7_tfbm_specials(); break;
      case 8: r = c8_moderate_invariance(o); break;
      case 9: r = c9_strong_weak_invariance(o); break;
      case 10: r = c10_quadratic_variation(o); break;
      case 11: r = c11_dickey_fuller(o); break;
      case 12: r = c12_tempered_unit_root(o); break;
      case 13: r = c13_exact_identities(o); break;
      default: throw invalid_parameter("unknown criterion " + std::to_string(id));
    }
  } catch (const std::exception& e) {
    r.id = id;
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Criterion ids of a suite: identities (closed-form checks and exact identities), mc, or all.
inline std::vector<int> suite_ids(const std::string& suite) {
  if (suite == "identities") return {1, 2, 3, 4, 5, 6, 7, 13};
  if (suite == "mc") return {8, 9, 10, 11, 12};
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13};
  throw invalid_parameter("unknown suite '" + suite + "' (expected identities, mc or all)");
}

inline std::string format_line(const CriterionResult& r) {
  std::string s = (r.passed() ? "PASS" : "FAIL") + std::string(" criterion ") + std::to_string(r.id);
  if (!r.title.empty()) s += ": " + r.title;
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.1f s)", r.seconds);
  s += buf;
  if (!r.error.empty()) s += "\n    error: " + r.error;
  for (const auto& c : r.checks) {
    std::snprintf(buf, sizeof buf, "%.4g <= %.4g", c.measured, c.bound);
    s += "\n    [" + std::string(c.pass ? "ok" : "no") + "] " + c.what + ": " + buf;
  }
  return s;
}

}  // namespace artfima::acceptance
