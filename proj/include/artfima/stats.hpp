#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "artfima/errors.hpp"
#include "artfima/specialfn.hpp"

namespace artfima {

inline double mean(const std::vector<double>& x) {
  detail::compensated_sum s;
  for (double v : x) s.add(v);
  return s.value() / static_cast<double>(x.size());
}

/// Unbiased sample variance.
inline double variance(const std::vector<double>& x) {
  const double m = mean(x);
  detail::compensated_sum s;
  for (double v : x) s.add((v - m) * (v - m));
  return s.value() / static_cast<double>(x.size() - 1);
}

/// Standard error of the sample variance from the fourth central moment.
inline double variance_standard_error(const std::vector<double>& x) {
  const double m = mean(x);
  const double n = static_cast<double>(x.size());
  detail::compensated_sum s2, s4;
  for (double v : x) {
    const double c = (v - m) * (v - m);
    s2.add(c);
    s4.add(c * c);
  }
  const double m2 = s2.value() / n, m4 = s4.value() / n;
  return std::sqrt(std::max(0.0, (m4 - m2 * m2) / n));
}

/// Linear-interpolation quantile of a sorted sample (Hyndman-Fan type 7).
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  detail::require(!sorted.empty(), "quantile: empty sample");
  detail::require(p >= 0.0 && p <= 1.0, "quantile: level must lie in [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> x, double p) {
  std::sort(x.begin(), x.end());
  return quantile_sorted(x, p);
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  detail::require(!a.empty() && !b.empty(), "ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

/// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
inline double ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf) {
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double F = cdf(a[i]);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  return d;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Empirical characteristic function with standard errors of its real and imaginary parts.
struct EmpiricalCf {
  std::complex<double> value;
  double se_re = 0.0, se_im = 0.0;
};

inline EmpiricalCf empirical_cf(const std::vector<double>& x, double theta) {
  detail::compensated_sum c, s, c2, s2;
  for (double v : x) {
    const double a = std::cos(theta * v), b = std::sin(theta * v);
    c.add(a);
    s.add(b);
    c2.add(a * a);
    s2.add(b * b);
  }
  const double n = static_cast<double>(x.size());
  const double mc = c.value() / n, ms = s.value() / n;
  EmpiricalCf r;
  r.value = {mc, ms};
  r.se_re = std::sqrt(std::max(0.0, c2.value() / n - mc * mc) / n);
  r.se_im = std::sqrt(std::max(0.0, s2.value() / n - ms * ms) / n);
  return r;
}

/// Empirical distribution artifact of a Monte Carlo experiment.
struct McSummary {
  std::vector<double> sorted;
  std::map<double, double> quantiles;
  std::map<std::string, double> ks;
  std::map<std::string, double> extra;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::uint64_t first_stream = 0;
  std::string config_hash;

  static inline const std::vector<double> standard_levels = {0.01, 0.05, 0.10, 0.25, 0.50, 0.75, 0.90, 0.95, 0.99};

  static McSummary from_sample(std::vector<double> x, std::uint64_t seed) {
    McSummary s;
    std::sort(x.begin(), x.end());
    s.sorted = std::move(x);
    s.replicates = s.sorted.size();
    s.seed = seed;
    for (double p : standard_levels) s.quantiles[p] = quantile_sorted(s.sorted, p);
    s.extra["mean"] = mean(s.sorted);
    if (s.replicates > 1) s.extra["variance"] = variance(s.sorted);
    return s;
  }
};

}  // namespace artfima
