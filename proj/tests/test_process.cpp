#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "artfima/process.hpp"
#include "artfima/stats.hpp"

using namespace artfima;

namespace {
ArtfimaModel fn(double d, double lambda) {
  ArtfimaModel m;
  m.d = d;
  m.lambda = lambda;
  return m;
}
ArtfimaModel arma11(double d, double lambda) {
  ArtfimaModel m = fn(d, lambda);
  m.arma.phi = {0.5};
  m.arma.theta = {0.3};
  return m;
}
}  // namespace

TEST(Spectral, Examples) {
  EXPECT_NEAR(spectral_density(fn(0.0, 0.7), 1.3), 1.0 / (2 * std::numbers::pi), 1e-16);
  EXPECT_NEAR(spectral_density(fn(0.3, 0.1), 0.0), std::pow(1 - std::exp(-0.1), -0.6) / (2 * std::numbers::pi), 1e-13);
  EXPECT_THROW(spectral_density(fn(0.3, 0.0), 0.0), singular_point);
  EXPECT_THROW(spectral_density(fn(0.6, 0.0), 0.5), invalid_parameter);
  EXPECT_GE(spectral_density(arma11(-0.4, 0.2), 2.0), 0.0);
}

TEST(Spectral, IntegralIsVariance) {
  const auto m = fn(0.3, 0.1);
  const double integral = 2 * quad::smooth([&](double x) { return spectral_density(m, x); }, 0.0, std::numbers::pi, 1e-14);
  EXPECT_NEAR(integral, autocovariance(0.3, 0.1, 0), 1e-8);
}

TEST(Autocovariance, ClosedFormVersusBruteForce) {
  for (long k : {0L, 1L, 5L}) {
    const double cf = autocovariance(0.3, 0.1, k);
    const double bf = autocovariance_bruteforce(fn(0.3, 0.1), k, 100000);
    EXPECT_NEAR(cf / bf, 1.0, 1e-9) << k;
  }
  EXPECT_EQ(autocovariance(0.0, 0.3, 0), 1.0);
  EXPECT_EQ(autocovariance(0.0, 0.3, 4), 0.0);
  EXPECT_THROW(autocovariance(-1.0, 0.3, 1), invalid_parameter);
}

TEST(Autocovariance, SumIdentity) {
  const double d = 0.3, lam = 0.05;
  detail::compensated_sum s;
  s.add(autocovariance(d, lam, 0));
  for (long k = 1; k <= 2000; ++k) s.add(2 * autocovariance(d, lam, k));
  EXPECT_NEAR(s.value() / 6.1249884176582, 1.0, 1e-6);
  EXPECT_NEAR(s.value() / std::pow(-std::expm1(-lam), -2 * d), 1.0, 1e-6);
}

TEST(Autocovariance, TailRatio) {
  const double r = acv_tail_ratio(0.3, 0.1, 500);
  EXPECT_GE(r, 0.98);
  EXPECT_LE(r, 1.02);
  EXPECT_TRUE(std::isfinite(acv_tail_ratio(0.3, 0.1, 5)));
  const double rn = acv_tail_ratio(-0.4, 0.1, 500);
  EXPECT_GE(rn, 0.98);
  EXPECT_LE(rn, 1.02);
}

TEST(Autocovariance, ToeplitzPositiveDefinite) {
  const int K = 512;
  for (double d : {-0.4, 0.25, 0.75, 1.5}) {
    for (double lam : {0.01, 0.1, 1.0}) {
      std::vector<double> g(K + 1);
      for (int k = 0; k <= K; ++k) g[k] = autocovariance(d, lam, k);
      Eigen::MatrixXd T(K + 1, K + 1);
      for (int i = 0; i <= K; ++i)
        for (int j = 0; j <= K; ++j) T(i, j) = g[std::abs(i - j)];
      Eigen::LLT<Eigen::MatrixXd> llt(T);
      EXPECT_EQ(llt.info(), Eigen::Success) << d << " " << lam;
    }
  }
}

TEST(Autocovariance, SpectralDuality) {
  for (long k = 0; k <= 10; ++k) {
    const double closed = autocovariance(0.3, 0.1, k);
    const double viaquad = autocovariance(arma11(0.3, 0.1), k);  // quadrature path for ARMA
    const double bf = autocovariance_bruteforce(arma11(0.3, 0.1), k, 20000);
    EXPECT_NEAR(viaquad, bf, 1e-7 * std::max(1.0, std::abs(bf))) << k;
    auto m = fn(0.3, 0.1);
    const double q =
        2 * quad::smooth([&](double x) { return std::cos(k * x) * spectral_density(m, x); }, 0.0, std::numbers::pi, 1e-14);
    EXPECT_NEAR(q, closed, 1e-7) << k;
  }
}

TEST(Simulate, WhiteNoiseIsIdentity) {
  RngStream a(5, 1), b(5, 1);
  auto p = simulate(fn(0.0, 0.0), InnovationLaw::gaussian(1.0), 1000, 1e-6, a);
  auto z = sample(InnovationLaw::gaussian(1.0), 1000, b);
  EXPECT_EQ(p.truncation, 0u);
  EXPECT_EQ(p.values, z);
}

TEST(Simulate, LagOneAutocorrelation) {
  const std::size_t N = 1000000;
  RngStream r(11, 0);
  auto p = simulate(fn(0.3, 0.1), InnovationLaw::gaussian(1.0), N, 1e-8, r);
  EXPECT_EQ(p.method, SimulationMethod::truncated_ma);
  const double rho_hat = sample_autocovariance(p.values, 1) / sample_autocovariance(p.values, 0);
  std::vector<double> rho(2001);
  const double g0 = autocovariance(0.3, 0.1, 0);
  for (long k = 0; k <= 2000; ++k) rho[k] = autocovariance(0.3, 0.1, k) / g0;
  // Bartlett variance of the lag-one sample autocorrelation
  double v = 0;
  for (long k = 1; k < 2000; ++k) {
    const double t = rho[k + 1] + rho[k - 1] - 2 * rho[1] * rho[k];
    v += t * t;
  }
  const double se = std::sqrt(v / N);
  EXPECT_LT(std::abs(rho_hat - rho[1]), 3 * se);
}

TEST(Simulate, VarianceIdentity) {
  const std::size_t N = 1000000;
  auto m = fn(0.3, 0.1);
  RngStream r(12, 0);
  SimulationOptions opt;
  opt.method = SimulationMethod::truncated_ma;
  auto p = simulate(m, InnovationLaw::gaussian(1.0), N, 1e-8, r, opt);
  const auto c = artfima_coeffs(m, p.truncation).values;
  double target = 0;
  for (double v : c) target += v * v;
  double ms = 0;
  for (double v : p.values) ms += v * v;
  ms /= N;
  // Var of the mean of X^2 for a Gaussian series: (2/N) sum_k gamma(k)^2
  double s = autocovariance(0.3, 0.1, 0) * autocovariance(0.3, 0.1, 0);
  for (long k = 1; k < 3000; ++k) s += 2 * std::pow(autocovariance(0.3, 0.1, k), 2);
  EXPECT_LT(std::abs(ms - target), 3 * std::sqrt(2 * s / N));
}

TEST(Simulate, InverseFilterRecoversInnovations) {
  auto m = arma11(0.25, 0.1);
  RngStream r(13, 0);
  SimulationOptions opt;
  opt.keep_innovations = true;
  auto p = simulate(m, InnovationLaw::gaussian(1.0), 5000, 1e-13, r, opt);
  const std::size_t K = 400;
  const auto z = inverse_filter(m, p.values, K);
  double se = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double diff = z[i] - p.innovations[i + K + p.truncation];
    se += diff * diff;
  }
  EXPECT_LT(std::sqrt(se / z.size()), 1e-8);
}

TEST(Simulate, CirculantAndMovingAverageAgree) {
  auto m = fn(0.3, 0.01);
  const std::size_t N = 2048, reps = 400;
  for (auto method : {SimulationMethod::truncated_ma, SimulationMethod::circulant}) {
    SimulationOptions opt;
    opt.method = method;
    ArtfimaSimulator sim(m, InnovationLaw::gaussian(1.0), N, opt);
    std::vector<double> s0(reps), s1(reps);
    for (std::size_t i = 0; i < reps; ++i) {
      RngStream r(14, i);
      auto p = sim.simulate(r);
      double a = 0, b = 0;
      for (std::size_t t = 0; t + 1 < N; ++t) {
        a += p.values[t] * p.values[t];
        b += p.values[t] * p.values[t + 1];
      }
      s0[i] = a / (N - 1);
      s1[i] = b / (N - 1);
    }
    const double se0 = std::sqrt(variance(s0) / reps), se1 = std::sqrt(variance(s1) / reps);
    EXPECT_LT(std::abs(mean(s0) - autocovariance(0.3, 0.01, 0)), 3.5 * se0) << to_string(method);
    EXPECT_LT(std::abs(mean(s1) - autocovariance(0.3, 0.01, 1)), 3.5 * se1) << to_string(method);
  }
}

TEST(Simulate, AutomaticChoosesCirculantForLongFilters) {
  ArtfimaSimulator sim(fn(0.3, 1e-6), InnovationLaw::gaussian(1.0), 1000);
  EXPECT_EQ(sim.method(), SimulationMethod::circulant);
  ArtfimaSimulator sim2(fn(0.3, 0.5), InnovationLaw::gaussian(1.0), 1000);
  EXPECT_EQ(sim2.method(), SimulationMethod::truncated_ma);
}

TEST(Simulate, TruncationRules) {
  RngStream r(15, 0);
  EXPECT_THROW(simulate(fn(0.6, 0.0), InnovationLaw::gaussian(1.0), 100, 1e-6, r), truncation_infeasible);
  EXPECT_THROW(simulate(fn(0.3, 0.0), InnovationLaw::gaussian(1.0), 100, 1e-6, r), truncation_infeasible);
  auto p = simulate(fn(-0.3, 0.0), InnovationLaw::gaussian(1.0), 100, 1e-3, r);
  EXPECT_EQ(p.tail_norm, "lp");
  EXPECT_LT(p.tail_bound, 1e-3);
  auto q = simulate(fn(0.3, 0.1), InnovationLaw::stable(1.5, 1.0, 0.0), 100, 1e-6, r);
  EXPECT_EQ(q.tail_norm, "l1");
  EXPECT_LT(q.tail_bound, 1e-6);
  for (double v : q.values) EXPECT_TRUE(std::isfinite(v));
}
