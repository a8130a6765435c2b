#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "artfima/coefficients.hpp"
#include "artfima/errors.hpp"
#include "artfima/fft.hpp"
#include "artfima/innovations.hpp"
#include "artfima/quadrature.hpp"
#include "artfima/rng.hpp"
#include "artfima/specialfn.hpp"

namespace artfima {

enum class SimulationMethod { automatic, truncated_ma, circulant };

inline const char* to_string(SimulationMethod m) {
  switch (m) {
    case SimulationMethod::automatic: return "automatic";
    case SimulationMethod::truncated_ma: return "truncated_ma";
    case SimulationMethod::circulant: return "circulant";
  }
  return "?";
}

struct SimulationOptions {
  double tol = 1e-6;
  SimulationMethod method = SimulationMethod::automatic;
  std::size_t max_truncation = 10'000'000;
  bool keep_innovations = false;
};

struct SamplePath {
  std::vector<double> values;  // X(1), ..., X(N)
  ArtfimaModel model;
  InnovationLaw law;
  SimulationMethod method = SimulationMethod::truncated_ma;
  std::size_t truncation = 0;  // M
  double tail_bound = 0.0;
  std::string tail_norm;  // "l1" or "lp"
  std::uint64_t seed = 0, stream_id = 0;
  std::vector<double> innovations;  // zeta(1 - M), ..., zeta(N) when kept
};

// ---------------------------------------------------------------- second-order theory

/// Spectral density of ARTFIMA(p, d, lambda, q) with unit-variance innovations. The ARMA gain is
/// evaluated at exp(-lambda - ix) because tempering multiplies every moving-average coefficient.
inline double spectral_density(const ArtfimaModel& model, double x) {
  detail::require(x >= -std::numbers::pi && x <= std::numbers::pi, "spectral_density: x must lie in [-pi, pi]");
  if (model.lambda == 0.0) {
    detail::require(model.d < 0.5, "spectral_density: lambda = 0 requires d < 1/2");
    if (x == 0.0 && model.d > 0.0) throw singular_point("spectral_density: singular at x = 0 for lambda = 0, d > 0");
  }
  const std::complex<double> z = std::polar(std::exp(-model.lambda), -x);
  const double gain = std::norm(eval_lag_polynomial(model.arma.theta, 1.0, z) / eval_lag_polynomial(model.arma.phi, -1.0, z));
  const double e = std::exp(-model.lambda);
  const double om = -std::expm1(-model.lambda);
  const double s = std::sin(x / 2.0);
  const double base = om * om + 4.0 * e * s * s;
  if (base == 0.0) return model.d < 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return gain * std::pow(base, -model.d) / (2.0 * std::numbers::pi);
}

namespace detail {

inline double omega_single(double d, long k) {
  if (k > 64 && k + d > 0) return std::exp(log_gamma_ratio(k + d, k + 1.0)) / gamma_fn(d);
  double w = 1.0;
  for (long j = 1; j <= k; ++j) w *= (j - 1.0 + d) / j;
  return w;
}

}  // namespace detail

/// Autocovariance of ARTFIMA(0, d, lambda, 0) with unit-variance innovations (hypergeometric closed form).
inline double autocovariance(double d, double lambda, long k) {
  detail::require(lambda > 0.0, "autocovariance: lambda must be positive");
  detail::require(!(d < 0 && d == std::floor(d)), "autocovariance: d must not be a negative integer");
  k = std::abs(k);
  if (d == 0.0) return k == 0 ? 1.0 : 0.0;
  const double w = -std::expm1(-2.0 * lambda);
  const double F = gauss_2f1(d, k + d, k + 1.0, 1.0 - w, w);
  return std::exp(-lambda * k) * detail::omega_single(d, k) * F;
}

/// sum_j e^{-lambda(2j + k)} a(j) a(j + k), summed until terms are negligible or `terms` is reached.
inline double autocovariance_bruteforce(const ArtfimaModel& model, long k, std::size_t terms = 100000) {
  k = std::abs(k);
  ArtfimaModel m = model;
  const auto c = artfima_coeffs(m, terms + static_cast<std::size_t>(k)).values;  // tempered when lambda > 0
  detail::compensated_sum s;
  for (std::size_t j = 0; j <= terms; ++j) s.add(c[j] * c[j + k]);
  return s.value();
}

/// Autocovariance of a general ARTFIMA model: closed form for p = q = 0, else spectral quadrature.
inline double autocovariance(const ArtfimaModel& model, long k) {
  model.validate();
  if (model.is_fractional_noise() && model.lambda > 0) return autocovariance(model.d, model.lambda, k);
  if (model.is_fractional_noise() && model.d == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kk = static_cast<double>(std::abs(k));
  auto f = [&](double x) { return std::cos(kk * x) * spectral_density(model, x); };
  if (model.lambda == 0.0) {
    // integrable singularity at 0
    return 2.0 * quad::finite([&](double x) { return f(x); }, 0.0, std::numbers::pi, 1e-12);
  }
  // split near the peak of width ~lambda at the origin
  const double cut = std::min(std::numbers::pi, 50.0 * model.lambda);
  double v = quad::smooth(f, 0.0, cut, 1e-13);
  if (cut < std::numbers::pi) v += quad::smooth(f, cut, std::numbers::pi, 1e-13);
  return 2.0 * v;
}

/// gamma(k) / (A k^{d-1} e^{-lambda k}) with A = (1 - e^{-2 lambda})^{-d} / Gamma(d).
inline double acv_tail_ratio(double d, double lambda, long k) {
  detail::require(k >= 1, "acv_tail_ratio: k >= 1 required");
  detail::require(lambda > 0.0, "acv_tail_ratio: lambda must be positive");
  detail::require(d != 0.0 && !(d < 0 && d == std::floor(d)), "acv_tail_ratio: d must be nonzero, not a negative integer");
  const double A = std::pow(-std::expm1(-2.0 * lambda), -d) / gamma_fn(d);
  return autocovariance(d, lambda, k) / (A * std::pow(double(k), d - 1.0) * std::exp(-lambda * k));
}

// ---------------------------------------------------------------- truncation

struct TruncationInfo {
  std::size_t M = 0;
  double tail_bound = 0.0;
  std::string norm;
};

namespace detail {

// Bound on sum_{k > L} k^{d-1} e^{-lambda k} (lambda > 0).
inline double power_exp_tail(double d, double lambda, double L) {
  if (d <= 1.0) return std::pow(L + 1.0, d - 1.0) * std::exp(-lambda * (L + 1.0)) / (-std::expm1(-lambda));
  return std::exp(lambda) * std::pow(lambda, -d) * boost::math::tgamma(d, lambda * L);
}

// Rough tail sum_{k > m} |e^{-lambda k} omega(k)| for fractional noise, used only to pick a method.
inline double fn_tail_estimate(double d, double lambda, double m) {
  if (d == 0.0) return 0.0;
  return power_exp_tail(d, lambda, m) / std::abs(gamma_fn(d));
}

}  // namespace detail

/// Smallest M whose neglected coefficient tail is below tol: l1 norm for lambda > 0,
/// l^p norm with p the innovation index for lambda = 0.
inline TruncationInfo choose_truncation(const ArtfimaModel& model, double p_index, double tol, std::size_t cap) {
  detail::require(tol > 0.0, "choose_truncation: tol must be positive");
  const bool l1 = model.lambda > 0.0;
  const double p = l1 ? 1.0 : p_index;
  if (!l1 && !(p * (1.0 - model.d) > 1.0))
    throw truncation_infeasible("simulate: lambda = 0 requires d < 1 - 1/alpha for a convergent moving average");
  std::size_t L = 4096;
  for (;;) {
    L = std::min(L, cap);
    ArtfimaModel m = model;
    const auto c = artfima_coeffs(m, L).values;
    // tail beyond L, scaled from the last coefficient with a safety factor of 2
    const double last = std::abs(c[L]);
    const double Ld = static_cast<double>(L);
    double beyond = 0.0;
    if (last > 0.0) {
      if (l1) {
        const double K = 2.0 * last / (std::pow(Ld, model.d - 1.0) * std::exp(-model.lambda * Ld));
        beyond = K * detail::power_exp_tail(model.d, model.lambda, Ld);
      } else {
        const double K = 2.0 * last / std::pow(Ld, model.d - 1.0);
        beyond = std::pow(K, p) * std::pow(Ld, p * (model.d - 1.0) + 1.0) / (p * (1.0 - model.d) - 1.0);
      }
    }
    // suffix sums of |c_k|^p
    std::vector<double> suffix(L + 2, 0.0);
    suffix[L + 1] = beyond;
    for (std::size_t k = L + 1; k-- > 0;) suffix[k] = suffix[k + 1] + std::pow(std::abs(c[k]), p);
    auto tail_at = [&](std::size_t m) { return std::pow(suffix[m + 1], 1.0 / p); };
    if (tail_at(L) < tol) {
      std::size_t lo = 0, hi = L;  // smallest m with tail_at(m) < tol
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (tail_at(mid) < tol)
          hi = mid;
        else
          lo = mid + 1;
      }
      return {lo, tail_at(lo), l1 ? "l1" : "lp"};
    }
    if (L >= cap)
      throw truncation_infeasible("simulate: coefficient tail bound not reachable within the truncation cap");
    L *= 4;
  }
}

// ---------------------------------------------------------------- simulation

/// Reusable simulator: filter spectrum or circulant eigenvalues are computed once and shared by
/// all replicates (simulate() is const and thread-safe).
class ArtfimaSimulator {
 public:
  ArtfimaSimulator(const ArtfimaModel& model, const InnovationLaw& law, std::size_t N, const SimulationOptions& opt = {})
      : model_(model), law_(law), N_(N), opt_(opt) {
    model.validate();
    law.validate();
    detail::require(N >= 1, "simulate: N must be positive");
    detail::require(opt.tol > 0.0, "simulate: tol must be positive");
    const bool circulant_ok = law.kind == InnovationLaw::Kind::gaussian && model.is_fractional_noise() && model.lambda > 0;
    method_ = opt.method;
    if (method_ == SimulationMethod::circulant && !circulant_ok)
      throw invalid_parameter("simulate: circulant method needs Gaussian innovations, p = q = 0 and lambda > 0");
    if (method_ == SimulationMethod::automatic) {
      method_ = SimulationMethod::truncated_ma;
      if (circulant_ok) {
        // estimate M cheaply; long filters are cheaper and exact by circulant embedding
        const double Mest = estimate_fn_truncation(model.d, model.lambda, opt.tol);
        if (Mest > 4.0 * static_cast<double>(N) || Mest > static_cast<double>(opt.max_truncation))
          method_ = SimulationMethod::circulant;
      }
    }
    if (method_ == SimulationMethod::truncated_ma)
      setup_ma();
    else
      setup_circulant();
  }

  SimulationMethod method() const { return method_; }
  std::size_t truncation() const { return trunc_.M; }
  double tail_bound() const { return trunc_.tail_bound; }
  std::size_t N() const { return N_; }

  SamplePath simulate(RngStream& rng) const {
    SamplePath path;
    path.model = model_;
    path.law = law_;
    path.method = method_;
    path.truncation = trunc_.M;
    path.tail_bound = trunc_.tail_bound;
    path.tail_norm = trunc_.norm;
    path.seed = rng.seed();
    path.stream_id = rng.stream_id();
    if (method_ == SimulationMethod::truncated_ma) {
      auto z = sample(law_, N_ + trunc_.M, rng);
      if (coeffs_.size() == 1) {
        path.values.assign(z.begin() + trunc_.M, z.end());
        for (auto& v : path.values) v *= coeffs_[0];
      } else if (!filter_) {
        path.values.assign(N_, 0.0);
        for (std::size_t t = 0; t < N_; ++t) {
          double s = 0.0;
          for (std::size_t k = 0; k < coeffs_.size(); ++k) s += coeffs_[k] * z[t + trunc_.M - k];
          path.values[t] = s;
        }
      } else {
        path.values = filter_->apply(z);
      }
      if (opt_.keep_innovations) path.innovations = std::move(z);
    } else {
      const std::size_t m = eig_.size();
      std::vector<std::complex<double>> w(m);
      for (std::size_t j = 0; j < m; ++j) {
        const double a = rng.normal(), b = rng.normal();
        w[j] = {eig_[j] * a, eig_[j] * b};
      }
      const auto y = dft(w);
      const double sd = std::sqrt(law_.variance);
      path.values.resize(N_);
      for (std::size_t t = 0; t < N_; ++t) path.values[t] = sd * y[t].real();
    }
    return path;
  }

 private:
  static double estimate_fn_truncation(double d, double lambda, double tol) {
    if (d == 0.0) return 0.0;
    double hi = 1.0;
    while (detail::fn_tail_estimate(d, lambda, hi) >= tol && hi < 1e12) hi *= 2.0;
    return hi;
  }

  void setup_ma() {
    trunc_ = choose_truncation(model_, law_.index(), opt_.tol, opt_.max_truncation);
    ArtfimaModel m = model_;
    coeffs_ = artfima_coeffs(m, trunc_.M).values;
    if (coeffs_.size() > 64) filter_ = std::make_shared<FftFilter>(coeffs_, N_);
  }

  void setup_circulant() {
    trunc_ = {0, 0.0, "exact"};
    std::size_t m = std::max<std::size_t>(2, next_pow2(2 * (N_ > 1 ? N_ - 1 : 1)));
    for (int attempt = 0; attempt < 4; ++attempt, m *= 2) {
      const std::size_t h = m / 2;
      std::vector<double> g(h + 1);
      for (std::size_t k = 0; k <= h; ++k) g[k] = autocovariance(model_.d, model_.lambda, static_cast<long>(k));
      std::vector<std::complex<double>> row(m);
      for (std::size_t k = 0; k < m; ++k) row[k] = g[k <= h ? k : m - k];
      const auto ev = dft(row);
      double mx = 0.0, mn = 0.0;
      for (const auto& e : ev) {
        mx = std::max(mx, e.real());
        mn = std::min(mn, e.real());
      }
      if (mn < -1e-10 * mx) continue;
      eig_.resize(m);
      for (std::size_t j = 0; j < m; ++j) eig_[j] = std::sqrt(std::max(0.0, ev[j].real()) / static_cast<double>(m));
      return;
    }
    throw factorization_error("simulate: circulant embedding is not nonnegative definite");
  }

  ArtfimaModel model_;
  InnovationLaw law_;
  std::size_t N_;
  SimulationOptions opt_;
  SimulationMethod method_ = SimulationMethod::truncated_ma;
  TruncationInfo trunc_;
  std::vector<double> coeffs_;
  std::shared_ptr<FftFilter> filter_;
  std::vector<double> eig_;
};

/// One ARTFIMA path X(1..N).
inline SamplePath simulate(const ArtfimaModel& model, const InnovationLaw& law, std::size_t N, double tol, RngStream& rng,
                           SimulationOptions opt = {}) {
  opt.tol = tol;
  return ArtfimaSimulator(model, law, N, opt).simulate(rng);
}

/// Applies the tempered inverse filter truncated at K; output index i corresponds to input index i + K.
inline std::vector<double> inverse_filter(const ArtfimaModel& model, const std::vector<double>& x, std::size_t K) {
  auto inv = inverse_coeffs(model, K).values;
  temper_in_place(inv, model.lambda);
  detail::require(x.size() > K, "inverse_filter: series shorter than filter");
  std::vector<double> out(x.size() - K);
  for (std::size_t t = K; t < x.size(); ++t) {
    detail::compensated_sum s;
    for (std::size_t k = 0; k <= K; ++k) s.add(inv[k] * x[t - k]);
    out[t - K] = s.value();
  }
  return out;
}

/// Biased sample autocovariance at a lag (divisor n).
inline double sample_autocovariance(const std::vector<double>& x, std::size_t lag) {
  const std::size_t n = x.size();
  detail::compensated_sum m;
  for (double v : x) m.add(v);
  const double mu = m.value() / n;
  detail::compensated_sum s;
  for (std::size_t t = lag; t < n; ++t) s.add((x[t] - mu) * (x[t - lag] - mu));
  return s.value() / n;
}

}  // namespace artfima
