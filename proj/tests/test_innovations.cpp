#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "artfima/innovations.hpp"
#include "artfima/parallel.hpp"
#include "artfima/stats.hpp"

using namespace artfima;

TEST(Philox, KnownAnswer) {
  const auto zero = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(zero[0], 0x6627e8d5u);
  EXPECT_EQ(zero[1], 0xe169c58du);
  EXPECT_EQ(zero[2], 0xbc57ac4cu);
  EXPECT_EQ(zero[3], 0x9b00dbd8u);
}

TEST(RngStream, Reproducible) {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool all_equal = true;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    all_equal = all_equal && (x == c.next_u64());
  }
  EXPECT_FALSE(all_equal);
}

TEST(RngStream, UniformOpenInterval) {
  RngStream r(1, 0);
  double lo = 1, hi = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi, 1.0);
}

TEST(Gaussian, MeanAndVariance) {
  RngStream r(2024, 1);
  const std::size_t n = 1000000;
  const auto x = sample(InnovationLaw::gaussian(1.0), n, r);
  EXPECT_LT(std::abs(mean(x)), 4.0 / std::sqrt(double(n)));
  EXPECT_NEAR(variance(x), 1.0, 0.01);
}

TEST(Stable, AlphaTwoIsGaussian) {
  RngStream r(2024, 2);
  const double sigma = 0.8;
  const auto x = sample(InnovationLaw::stable(2.0, sigma, 0.3), 1000000, r);
  const double sd = std::sqrt(2.0) * sigma;
  const double ks = ks_one_sample(x, [&](double v) { return normal_cdf(v / sd); });
  EXPECT_LT(ks, 0.0015);
}

TEST(Stable, CharacteristicFunction) {
  const StableParams p{1.5, 1.2, 0.5};
  RngStream r(2024, 3);
  const auto x = sample(InnovationLaw::stable(p.alpha, p.sigma, p.beta), 1000000, r);
  for (double theta : {0.5, 1.0, 2.0}) {
    const auto e = empirical_cf(x, theta);
    const auto ref = std::exp(stable_log_cf(p, theta));
    EXPECT_LT(std::abs(e.value.real() - ref.real()), 3 * e.se_re) << theta;
    EXPECT_LT(std::abs(e.value.imag() - ref.imag()), 3 * e.se_im) << theta;
  }
}

TEST(Stable, LevyIncrementSelfSimilarity) {
  const std::size_t reps = 1000000, n = 16;
  std::vector<double> sums(reps), single(reps);
  RngStream r(2024, 4);
  for (std::size_t i = 0; i < reps; ++i) {
    const auto inc = levy_increments(1.5, 1.0, 0.0, 1.0 / n, n, r);
    double s = 0;
    for (double v : inc) s += v;
    sums[i] = s;
  }
  RngStream r2(2024, 5);
  single = levy_increments(1.5, 1.0, 0.0, 1.0, reps, r2);
  EXPECT_LT(ks_two_sample(sums, single), 0.002);
  EXPECT_THROW(levy_increments(1.5, 1.0, 0.0, 0.0, 3, r), invalid_parameter);
}

TEST(Stable, LevyStandardGaussianIncrements) {
  RngStream r(2024, 6);
  const auto x = levy_increments(2.0, 1.0 / std::sqrt(2.0), 0.0, 1.0, 200000, r);
  EXPECT_NEAR(variance(x), 1.0, 0.02);
}

TEST(Pareto, TailConstant) {
  RngStream r(2024, 7);
  const double alpha = 1.5;
  auto x = sample(InnovationLaw::pareto(alpha, 1.0, 0.0), 1000000, r);
  std::sort(x.begin(), x.end());
  const double n = double(x.size());
  for (double p : {0.90, 0.95, 0.99, 0.995, 0.999}) {
    const double q = quantile_sorted(x, p);
    const double tail = double(x.end() - std::upper_bound(x.begin(), x.end(), q)) / n;
    EXPECT_NEAR(std::pow(q, alpha) * tail, 1.0, 0.1) << p;
  }
}

TEST(Pareto, MeanZero) {
  for (auto law : {InnovationLaw::pareto(1.5, 1.0, 0.0), InnovationLaw::pareto(1.7, 0.3, 2.0)}) {
    RngStream r(2024, 8);
    const std::size_t n = 1000000;
    const auto x = sample(law, n, r);
    EXPECT_LT(std::abs(mean(x)), 10.0 * std::pow(double(n), 1.0 / law.alpha - 1.0));
  }
}

TEST(Pareto, LimitParameters) {
  const auto p = InnovationLaw::pareto(1.5, 3.0, 1.0).limit_params();
  EXPECT_DOUBLE_EQ(p.beta, 0.5);
  // C_alpha sigma^alpha = c1 + c2
  const double C = (1 - 1.5) / (std::tgamma(0.5) * std::cos(std::numbers::pi * 0.75));
  EXPECT_NEAR(C * std::pow(p.sigma, 1.5), 4.0, 1e-12);
}

TEST(Parallel, IndependentOfWorkerCount) {
  auto run = [](unsigned w) {
    std::vector<double> out(64);
    parallel_for(out.size(), w, [&](std::size_t i) {
      RngStream r(99, i);
      out[i] = sample(InnovationLaw::stable(1.7, 1.0, 0.2), 100, r)[99];
    });
    return out;
  };
  EXPECT_EQ(run(1), run(4));
}

TEST(Laws, Validation) {
  EXPECT_THROW(InnovationLaw::stable(1.0, 1.0, 0.0), invalid_parameter);
  EXPECT_THROW(InnovationLaw::stable(1.5, -1.0, 0.0), invalid_parameter);
  EXPECT_THROW(InnovationLaw::pareto(2.0, 1.0, 0.0), invalid_parameter);
  EXPECT_THROW(InnovationLaw::pareto(1.5, 0.0, 0.0), invalid_parameter);
  EXPECT_THROW(InnovationLaw::gaussian(0.0), invalid_parameter);
}
