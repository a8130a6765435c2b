#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "artfima/errors.hpp"
#include "artfima/fft.hpp"
#include "artfima/innovations.hpp"
#include "artfima/parallel.hpp"
#include "artfima/quadrature.hpp"
#include "artfima/rng.hpp"
#include "artfima/specialfn.hpp"

namespace artfima {

/// Parameters of the kernel h_{H, alpha, lambda}.
struct KernelParams {
  double H = 0.5;
  double alpha = 2.0;
  double lambda = 0.0;

  double power() const { return H - 1.0 / alpha; }

  void validate() const {
    detail::require(H > 0.0 && std::isfinite(H), "KernelParams: H must be positive");
    detail::require(alpha > 1.0 && alpha <= 2.0, "KernelParams: alpha must lie in (1, 2]");
    detail::require(lambda >= 0.0 && std::isfinite(lambda), "KernelParams: lambda must be >= 0");
    if (lambda == 0.0) detail::require(H < 1.0, "KernelParams: lambda = 0 requires H in (0, 1)");
  }
};

namespace detail {

inline double pos_pow(double x, double p) { return x > 0.0 ? std::pow(x, p) : 0.0; }

inline void check_kernel_point(const KernelParams& k, double t, double y) {
  k.validate();
  require(t >= 0.0 && std::isfinite(t) && std::isfinite(y), "kernel_h: t must be >= 0 and y finite");
  if (t > 0.0 && k.power() < 0.0 && (y == 0.0 || y == t))
    throw singular_point("kernel_h: kernel is singular at y = 0 and y = t when H < 1/alpha");
}

// lambda * int_{T0}^{T1} u^p e^{-lambda u} du, closed form.
inline double tempered_power_integral(double p, double lambda, double T0, double T1) {
  if (lambda == 0.0 || T1 <= T0) return 0.0;
  if (T0 > 0.0 && (T1 - T0) < 0.5 * T0) {
    auto f = [&](double u) { return std::pow(u, p) * std::exp(-lambda * u); };
    return lambda * boost::math::quadrature::gauss<double, 20>::integrate(f, T0, T1);
  }
  const double a = p + 1.0, x0 = lambda * T0, x1 = lambda * T1;
  const double scale = std::pow(lambda, -p);
  if (x0 > a) return scale * (boost::math::tgamma(a, x0) - boost::math::tgamma(a, x1));
  const double lo0 = x0 > 0.0 ? boost::math::tgamma_lower(a, x0) : 0.0;
  return scale * (boost::math::tgamma_lower(a, x1) - lo0);
}

// Kernel from T0 = (-y)_+ and T1 = (t - y)_+, both supplied exactly.
inline double kernel_from_offsets(double p, double lambda, double t, double T0, double T1) {
  if (T1 <= 0.0) return 0.0;
  double powers;
  if (T0 > 0.0) {
    // T1 = T0 + t: difference of the power terms without cancellation
    powers = std::pow(T0, p) * std::exp(-lambda * T0) * std::expm1(p * std::log1p(t / T0) - lambda * t);
  } else {
    powers = std::pow(T1, p) * std::exp(-lambda * T1);
  }
  return powers + tempered_power_integral(p, lambda, T0, T1);
}

}  // namespace detail

/// Kernel h(t; y) evaluated from its defining three-term form; the inner integral by quadrature.
inline double kernel_h(const KernelParams& k, double t, double y) {
  detail::check_kernel_point(k, t, y);
  if (t == 0.0) return 0.0;
  const double p = k.power(), lam = k.lambda;
  const double T0 = std::max(-y, 0.0), T1 = std::max(t - y, 0.0);
  double v = detail::pos_pow(T1, p) * std::exp(-lam * T1) - detail::pos_pow(T0, p) * std::exp(-lam * T0);
  if (lam > 0.0 && T1 > T0) {
    auto f = [&](double u, double uc) {
      const double uu = (T0 == 0.0 && u < 0.5 * (T0 + T1)) ? -uc : u;
      return std::pow(uu, p) * std::exp(-lam * u);
    };
    v += lam * quad::finite(f, T0, T1, 1e-14);
  }
  return v;
}

/// Kernel h(t; y) from the single-integral representations: p int_{T0}^{T1} u^{p-1} e^{-lambda u} du when
/// H > 1/alpha (or y < 0), and p(lambda^{-p} Gamma(p) - int_{T1}^inf u^{p-1} e^{-lambda u} du) for 0 <= y < t
/// when H < 1/alpha. Inside the band |H - 1/alpha| < 1e-3 the three-term form is used.
inline double kernel_h_integral(const KernelParams& k, double t, double y) {
  detail::check_kernel_point(k, t, y);
  if (t == 0.0 || y >= t) return 0.0;
  const double p = k.power(), lam = k.lambda;
  if (std::abs(p) < 1e-3) return kernel_h(k, t, y);
  const double T0 = std::max(-y, 0.0), T1 = t - y;
  auto g = [&](double u) { return std::pow(u, p - 1.0) * std::exp(-lam * u); };
  if (p > 0.0 || y < 0.0) {
    auto f = [&](double u, double uc) {
      const double uu = (T0 == 0.0 && u < 0.5 * (T0 + T1)) ? -uc : u;
      return std::pow(uu, p - 1.0) * std::exp(-lam * u);
    };
    return p * quad::finite(f, T0, T1, 1e-14);
  }
  const double constant = lam > 0.0 ? std::pow(lam, -p) * gamma_fn(p) : 0.0;
  return p * (constant - quad::half_line(g, T1, 1e-14));
}

/// Kernel h(t; y) in closed form through incomplete gamma functions; used for covariances and simulation.
inline double kernel_h_closed(const KernelParams& k, double t, double y) {
  detail::check_kernel_point(k, t, y);
  if (t == 0.0) return 0.0;
  return detail::kernel_from_offsets(k.power(), k.lambda, t, std::max(-y, 0.0), std::max(t - y, 0.0));
}

namespace detail {

// Left truncation point Y: e^{-lambda Y} < 1e-14 when lambda > 0, else the power-tail bound
// (|p| t)^alpha Y^{alpha(p-1)+1} / (alpha(1-p) - 1) < 1e-10.
inline double left_tail_cutoff(const KernelParams& k, double tmax) {
  if (k.lambda > 0.0) return std::max(1.0, 14.0 * std::log(10.0) / k.lambda);
  const double p = k.power(), a = k.alpha;
  if (p == 0.0) return 1.0;
  const double e = a * (1.0 - p) - 1.0;
  const double c = std::pow(std::abs(p) * std::max(tmax, 1e-300), a) / e;
  const double Y = std::pow(1e-10 / c, 1.0 / (a * (p - 1.0) + 1.0));
  return std::clamp(Y, 1.0, 1e12);
}

// int over (-inf, m] of F(T0(y), T1(y)...) handled by the caller through offsets; here a generic
// integral of phi(y) over (-inf, -1] by y = -e^u.
template <class Phi>
double left_tail_integral(Phi&& phi, double tol) {
  auto f = [&](double u) {
    const double e = std::exp(u);
    if (e > 1e150) return 0.0;
    const double v = phi(-e) * e;
    return std::isfinite(v) ? v : 0.0;
  };
  return quad::half_line(f, 0.0, tol);
}

}  // namespace detail

/// Covariance of B^{II}_{H,lambda}(s), B^{II}_{H,lambda}(t): Gamma(H+1/2)^{-2} int h(s;y) h(t;y) dy with alpha = 2.
inline double tfbm2_covariance(double H, double lambda, double s, double t) {
  const KernelParams k{H, 2.0, lambda};
  k.validate();
  detail::require(s >= 0.0 && t >= 0.0, "tfbm2_covariance: times must be >= 0");
  if (s == 0.0 || t == 0.0) return 0.0;
  const double p = k.power();
  const double m = std::min(s, t);
  const double tol = 1e-12;
  // y in (-inf, -1]
  auto tail = [&](double y) {
    const double T0 = -y;
    return detail::kernel_from_offsets(p, lambda, s, T0, T0 + s) * detail::kernel_from_offsets(p, lambda, t, T0, T0 + t);
  };
  double v = detail::left_tail_integral(tail, tol);
  // y in [-1, 0): T0 = -y carried exactly near 0
  auto mid = [&](double y, double yc) {
    const double T0 = (y > -0.5) ? yc : -y;
    return detail::kernel_from_offsets(p, lambda, s, T0, T0 + s) * detail::kernel_from_offsets(p, lambda, t, T0, T0 + t);
  };
  v += quad::finite(mid, -1.0, 0.0, tol);
  // y in [0, m): T0 = 0, T1 = s - y and t - y; the smaller carried exactly near m
  auto right = [&](double y, double yc) {
    const double near = (y > 0.5 * m) ? yc : m - y;
    const double Ts = (s == m) ? near : s - y;
    const double Tt = (t == m) ? near : t - y;
    return detail::kernel_from_offsets(p, lambda, s, 0.0, Ts) * detail::kernel_from_offsets(p, lambda, t, 0.0, Tt);
  };
  v += quad::finite(right, 0.0, m, tol);
  const double g = gamma_fn(H + 0.5);
  return v / (g * g);
}

inline double tfbm2_variance(double H, double lambda, double t) { return tfbm2_covariance(H, lambda, t, t); }

/// C_1^2 = Gamma(1-H) / (2^{2H} H Gamma(H+1/2) sqrt(pi)): B^{II}_{H,0} has the law of C_1 B_H.
inline double tfbm2_fbm_constant(double H) {
  detail::require(H > 0.0 && H < 1.0, "tfbm2_fbm_constant: H must lie in (0, 1)");
  return gamma_fn(1.0 - H) / (std::pow(2.0, 2.0 * H) * H * gamma_fn(H + 0.5) * std::sqrt(std::numbers::pi));
}

inline double fbm_covariance(double H, double s, double t) {
  return 0.5 * (std::pow(s, 2 * H) + std::pow(t, 2 * H) - std::pow(std::abs(t - s), 2 * H));
}

namespace detail {

inline bool is_uniform_grid(const std::vector<double>& g, double& h) {
  if (g.size() < 2) return false;
  h = g[1] - g[0];
  if (!(h > 0)) return false;
  const double t0 = g[0];
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g[i] - (t0 + h * i)) > 1e-12 * std::max(1.0, std::abs(g[i]))) return false;
  return std::abs(t0) < 1e-15 || std::abs(t0 - h) < 1e-12;
}

}  // namespace detail

/// Covariance matrix of B^{II}_{H,lambda} on the positive grid points, built from the variance
/// function through stationary increments.
inline Eigen::MatrixXd tfbm2_covariance_matrix(double H, double lambda, const std::vector<double>& grid) {
  std::vector<double> g;
  for (double t : grid)
    if (t > 0.0) g.push_back(t);
  const std::size_t n = g.size();
  Eigen::MatrixXd C(n, n);
  double h = 0.0;
  if (detail::is_uniform_grid(g, h) && std::abs(g[0] - h) < 1e-12) {
    std::vector<double> v(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) v[k] = tfbm2_variance(H, lambda, g[k - 1]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t lag = i > j ? i - j : j - i;
        C(i, j) = 0.5 * (v[i + 1] + v[j + 1] - v[lag]);
      }
    return C;
  }
  std::map<double, double> memo;
  auto var = [&](double u) {
    if (u == 0.0) return 0.0;
    auto it = memo.find(u);
    if (it != memo.end()) return it->second;
    return memo[u] = tfbm2_variance(H, lambda, u);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) C(i, j) = C(j, i) = 0.5 * (var(g[i]) + var(g[j]) - var(std::abs(g[i] - g[j])));
  return C;
}

/// Exact Gaussian sampler from a covariance matrix by Cholesky factorization with diagonal jitter.
class GaussianPathSampler {
 public:
  explicit GaussianPathSampler(const Eigen::MatrixXd& C) {
    const double scale = std::max(1.0, C.diagonal().maxCoeff());
    for (double jitter : {0.0, 1e-13, 1e-12, 1e-11, 1e-10}) {
      Eigen::MatrixXd A = C;
      A.diagonal().array() += jitter * scale;
      Eigen::LLT<Eigen::MatrixXd> llt(A);
      if (llt.info() == Eigen::Success) {
        L_ = llt.matrixL();
        jitter_ = jitter * scale;
        return;
      }
    }
    throw factorization_error("covariance factorization failed with jitter up to 1e-10");
  }
  std::size_t size() const { return static_cast<std::size_t>(L_.rows()); }
  double jitter() const { return jitter_; }

  std::vector<double> sample(RngStream& rng) const {
    const Eigen::Index n = L_.rows();
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
    Eigen::VectorXd x = L_.triangularView<Eigen::Lower>() * z;
    return std::vector<double>(x.data(), x.data() + n);
  }

 private:
  Eigen::MatrixXd L_;
  double jitter_ = 0.0;
};

/// Gaussian path P(0) = 0, P(h), ..., P(nh) with stationary increments. The increment autocovariance
/// r(0..K) is supplied in batches; circulant embedding is tried with up to four doublings, then Cholesky.
class StationaryIncrementSampler {
 public:
  using AcvProvider = std::function<std::vector<double>(std::size_t K)>;

  StationaryIncrementSampler(const AcvProvider& acv, std::size_t n) : n_(n) {
    detail::require(n >= 1, "increment sampler: n must be positive");
    std::size_t m = next_pow2(2 * n);
    for (int attempt = 0; attempt < 4; ++attempt, m *= 2) {
      const std::size_t h = m / 2;
      const auto r = acv(h);
      std::vector<std::complex<double>> row(m);
      for (std::size_t k = 0; k < m; ++k) row[k] = r[k <= h ? k : m - k];
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
    const auto r = acv(n);
    Eigen::MatrixXd C(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) C(i, j) = r[i > j ? i - j : j - i];
    chol_ = std::make_shared<GaussianPathSampler>(C);
  }

  bool circulant() const { return !chol_; }

  std::vector<double> sample(RngStream& rng) const {
    std::vector<double> inc;
    if (chol_) {
      inc = chol_->sample(rng);
    } else {
      const std::size_t m = eig_.size();
      std::vector<std::complex<double>> w(m);
      for (std::size_t j = 0; j < m; ++j) {
        const double a = rng.normal(), b = rng.normal();
        w[j] = {eig_[j] * a, eig_[j] * b};
      }
      const auto y = dft(w);
      inc.resize(n_);
      for (std::size_t k = 0; k < n_; ++k) inc[k] = y[k].real();
    }
    std::vector<double> path(n_ + 1, 0.0);
    for (std::size_t k = 0; k < n_; ++k) path[k + 1] = path[k] + inc[k];
    return path;
  }

 private:
  std::size_t n_;
  std::vector<double> eig_;
  std::shared_ptr<GaussianPathSampler> chol_;
};

/// Increment autocovariance from a variance function v with v(0) = 0: r(k) = (v(k+1) + v(k-1) - 2 v(k)) / 2 in grid units.
inline std::vector<double> increment_acv_from_variance(const std::vector<double>& v, std::size_t K) {
  detail::require(v.size() >= K + 2, "increment_acv: variance table too short");
  std::vector<double> r(K + 1);
  for (std::size_t k = 0; k <= K; ++k) r[k] = 0.5 * (v[k + 1] + v[k == 0 ? 1 : k - 1] - 2.0 * v[k]);
  return r;
}

/// Fractional Gaussian noise autocovariance on a grid of step h, for unit-variance B_H.
inline StationaryIncrementSampler::AcvProvider fbm_increment_acv(double H, double h) {
  detail::require(H > 0.0 && H < 1.0, "fbm: H must lie in (0, 1)");
  return [H, h](std::size_t K) {
    std::vector<double> v(K + 2);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::pow(h * static_cast<double>(k), 2 * H);
    return increment_acv_from_variance(v, K);
  };
}

/// Increment autocovariance of B^{II}_{H,lambda} on a grid of step h; variances are computed by quadrature
/// on `workers` threads and cached across calls.
inline StationaryIncrementSampler::AcvProvider tfbm2_increment_acv(double H, double lambda, double h, unsigned workers = 1) {
  KernelParams{H, 2.0, lambda}.validate();
  auto cache = std::make_shared<std::vector<double>>(1, 0.0);
  return [=](std::size_t K) {
    const std::size_t need = K + 2, have = cache->size();
    if (need > have) {
      cache->resize(need);
      parallel_for(need - have, workers, [&](std::size_t i) {
        const std::size_t k = have + i;
        (*cache)[k] = tfbm2_variance(H, lambda, h * static_cast<double>(k));
      });
    }
    return increment_acv_from_variance(*cache, K);
  };
}

enum class LimitScheme { kernel_discretization, covariance_factorization };

inline const char* to_string(LimitScheme s) {
  return s == LimitScheme::kernel_discretization ? "kernel_discretization" : "covariance_factorization";
}

struct LimitOptions {
  double sigma = 0.0;  // scale of M_alpha; 0 selects 1/sqrt(2) for alpha = 2 (standard B) and 1 otherwise
  double beta = 0.0;
  double mesh = 1.0 / 1024.0;
  double growth = 1.02;  // geometric cell growth left of -1
};

struct LimitPathSample {
  std::vector<double> times;
  std::vector<double> values;
  KernelParams params;
  LimitScheme scheme = LimitScheme::covariance_factorization;
  double mesh = 0.0;
  std::vector<std::string> warnings;
};

/// Simulator of Z^{II}_{H,alpha,lambda}(t) = int h(t;y) M_alpha(dy) on a fixed grid; set up once, sample many times.
class LimitSimulator {
 public:
  LimitSimulator(const KernelParams& k, std::vector<double> grid, LimitScheme scheme, LimitOptions opt = {})
      : k_(k), grid_(std::move(grid)), scheme_(scheme), opt_(opt) {
    k.validate();
    detail::require(!grid_.empty(), "simulate_limit: empty grid");
    for (double t : grid_) detail::require(t >= 0.0 && t <= 1.0, "simulate_limit: grid must lie in [0, 1]");
    if (opt_.sigma <= 0.0) opt_.sigma = k.alpha == 2.0 ? 1.0 / std::sqrt(2.0) : 1.0;
    StableParams{k.alpha, opt_.sigma, opt_.beta}.validate();
    detail::require(opt_.mesh > 0.0 && opt_.mesh <= 0.25, "simulate_limit: mesh must lie in (0, 1/4]");
    for (std::size_t i = 0; i < grid_.size(); ++i)
      if (grid_[i] > 0.0) positive_.push_back(i);
    if (scheme == LimitScheme::covariance_factorization) {
      if (k.alpha != 2.0) throw invalid_parameter("simulate_limit: covariance factorization requires alpha = 2");
      std::vector<double> pos;
      for (auto i : positive_) pos.push_back(grid_[i]);
      if (!pos.empty()) {
        // Z = Gamma(H+1/2) sqrt(2) sigma B^{II}
        const double c = gamma_fn(k.H + 0.5) * std::sqrt(2.0) * opt_.sigma;
        chol_ = std::make_shared<GaussianPathSampler>(c * c * tfbm2_covariance_matrix(k.H, k.lambda, pos));
      }
    } else {
      setup_cells();
    }
  }

  const std::vector<std::string>& warnings() const { return warnings_; }
  std::size_t cells() const { return widths_.size(); }

  LimitPathSample sample(RngStream& rng) const {
    LimitPathSample out;
    out.times = grid_;
    out.values.assign(grid_.size(), 0.0);
    out.params = k_;
    out.scheme = scheme_;
    out.mesh = opt_.mesh;
    out.warnings = warnings_;
    if (positive_.empty()) return out;
    if (scheme_ == LimitScheme::covariance_factorization) {
      const auto x = chol_->sample(rng);
      for (std::size_t j = 0; j < positive_.size(); ++j) out.values[positive_[j]] = x[j];
    } else {
      const std::size_t nc = widths_.size();
      std::vector<double> dM(nc);
      for (std::size_t c = 0; c < nc; ++c) {
        const StableParams sp{k_.alpha, opt_.sigma * std::pow(widths_[c], 1.0 / k_.alpha), opt_.beta};
        dM[c] = stable_draw(sp, rng);
      }
      for (std::size_t j = 0; j < positive_.size(); ++j) {
        const double* row = weights_.data() + j * nc;
        double s = 0.0;
        for (std::size_t c = 0; c < nc; ++c) s += row[c] * dM[c];
        out.values[positive_[j]] = s;
      }
    }
    return out;
  }

 private:
  void setup_cells() {
    double tmax = 0.0;
    for (double t : grid_) tmax = std::max(tmax, t);
    const double Y = detail::left_tail_cutoff(k_, std::max(tmax, 1e-3));
    const double dy = opt_.mesh;
    std::vector<double> edges;
    // geometric cells from -Y up to -1, then uniform up to tmax
    std::vector<double> left;
    double x = -1.0, w = dy;
    while (x > -Y) {
      left.push_back(x);
      x -= w;
      w *= opt_.growth;
    }
    left.push_back(std::min(x, -Y));
    for (auto it = left.rbegin(); it != left.rend(); ++it) edges.push_back(*it);
    const std::size_t nu = static_cast<std::size_t>(std::ceil((tmax + 1.0) / dy - 1e-9));
    for (std::size_t i = 1; i <= nu; ++i) edges.push_back(std::min(tmax, -1.0 + dy * i));
    for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
      const double a = edges[c], b = edges[c + 1];
      if (b > a) {
        widths_.push_back(b - a);
        mids_.push_back(0.5 * (a + b));
      }
    }
    const std::size_t nc = widths_.size();
    weights_.assign(positive_.size() * nc, 0.0);
    for (std::size_t j = 0; j < positive_.size(); ++j) {
      const double t = grid_[positive_[j]];
      for (std::size_t c = 0; c < nc; ++c) {
        const double y = mids_[c];
        weights_[j * nc + c] =
            y < t ? detail::kernel_from_offsets(k_.power(), k_.lambda, t, std::max(-y, 0.0), t - y) : 0.0;
      }
    }
    if (k_.alpha == 2.0) {
      // compare the discretized variance at the largest time with quadrature
      const std::size_t j = positive_.size() - 1;
      const double t = grid_[positive_[j]];
      double v = 0.0;
      for (std::size_t c = 0; c < nc; ++c) v += weights_[j * nc + c] * weights_[j * nc + c] * widths_[c];
      const double g = gamma_fn(k_.H + 0.5);
      const double exact = g * g * tfbm2_variance(k_.H, k_.lambda, t);
      discretization_error_ = std::abs(v / exact - 1.0);
      if (discretization_error_ > 0.01)
        warnings_.push_back("mesh too coarse: discretized variance deviates " + std::to_string(100 * discretization_error_) +
                            "% from quadrature");
    }
  }

  KernelParams k_;
  std::vector<double> grid_;
  LimitScheme scheme_;
  LimitOptions opt_;
  std::vector<std::size_t> positive_;
  std::shared_ptr<GaussianPathSampler> chol_;
  std::vector<double> widths_, mids_, weights_;
  std::vector<std::string> warnings_;
  double discretization_error_ = 0.0;
};

/// One path of Z^{II}_{H,alpha,lambda} on the grid.
inline LimitPathSample simulate_limit(const KernelParams& k, const std::vector<double>& grid, LimitScheme scheme,
                                      RngStream& rng, const LimitOptions& opt = {}) {
  return LimitSimulator(k, grid, scheme, opt).sample(rng);
}

/// int |h(t;y)|^alpha dy and int |h(t;y)|^alpha sign(h(t;y)) dy, by quadrature.
inline std::pair<double, double> kernel_alpha_moments(const KernelParams& k, double t) {
  k.validate();
  if (t == 0.0) return {0.0, 0.0};
  const double p = k.power(), a = k.alpha, lam = k.lambda;
  auto both = [&](double T0, double T1) {
    const double h = detail::kernel_from_offsets(p, lam, t, T0, T1);
    const double m = std::pow(std::abs(h), a);
    return std::pair<double, double>{m, h < 0 ? -m : m};
  };
  double I1 = 0.0, I2 = 0.0;
  for (int which = 0; which < 2; ++which) {
    auto pick = [&](std::pair<double, double> v) { return which == 0 ? v.first : v.second; };
    double v = detail::left_tail_integral([&](double y) { return pick(both(-y, t - y)); }, 1e-11);
    v += quad::finite(
        [&](double y, double yc) {
          const double T0 = (y > -0.5) ? yc : -y;
          return pick(both(T0, T0 + t));
        },
        -1.0, 0.0, 1e-11);
    v += quad::finite(
        [&](double y, double yc) {
          const double T1 = (y > 0.5 * t) ? yc : t - y;
          return pick(both(0.0, T1));
        },
        0.0, t, 1e-11);
    (which == 0 ? I1 : I2) = v;
  }
  return {I1, I2};
}

/// Characteristic function of c * Z^{II}_{H,alpha,lambda}(t) with M_alpha scale sigma and skewness beta.
inline std::complex<double> limit_characteristic_function(const KernelParams& k, double t, double theta, double sigma,
                                                          double beta, double c = 1.0) {
  const auto [I1, I2] = kernel_alpha_moments(k, t);
  const double th = c * theta;
  const double m = std::pow(sigma * std::abs(th), k.alpha);
  const double sg = th > 0 ? 1.0 : (th < 0 ? -1.0 : 0.0);
  return std::exp(std::complex<double>(-m * I1, m * beta * std::tan(std::numbers::pi * k.alpha / 2.0) * sg * I2));
}

}  // namespace artfima
