#include <gtest/gtest.h>

#include <cmath>

#include "artfima/invariance.hpp"

using namespace artfima;

namespace {
ArtfimaModel fn(double d) {
  ArtfimaModel m;
  m.d = d;
  return m;
}
}  // namespace

TEST(Regime, Classification) {
  auto r = classify_regime(TemperingScheme::moderate(2.0), 1000);
  EXPECT_EQ(r.regime, Regime::moderate);
  EXPECT_NEAR(r.realized, 2.0, 1e-12);
  EXPECT_EQ(classify_regime(TemperingScheme::power(0.5), 100).regime, Regime::strong);
  EXPECT_EQ(classify_regime(TemperingScheme::power(2.0), 100).regime, Regime::weak);
  auto bad = TemperingScheme::custom([](double N) { return 2.0 / N; }, 0.0, "2/N declared weak");
  EXPECT_THROW(classify_regime(bad, 100), inconsistent_scheme);
  auto bad2 = TemperingScheme::custom([](double N) { return std::pow(N, -0.5); }, 3.0, "N^-1/2 declared moderate");
  EXPECT_THROW(classify_regime(bad2, 100), inconsistent_scheme);
}

TEST(PartialSums, Examples) {
  EXPECT_EQ(partial_sums(std::vector<double>{2, -1, 4}, {1.0})[0], 5.0);
  std::vector<double> ones(10, 1.0);
  const auto s = partial_sums(ones, {0.1, 0.29, 0.3, 0.7, 1.0});
  EXPECT_EQ(s, (std::vector<double>{1, 2, 3, 7, 10}));
  std::vector<double> x{0.5, -2.0, 3.25, 1.0, -0.75, 4.0, 0.125, -1.0};
  const auto coarse = partial_sums(x, {0.5, 1.0});
  const auto fine = partial_sums(x, {0.25, 0.5, 0.75, 1.0});
  EXPECT_EQ(coarse[0], fine[1]);
  EXPECT_EQ(coarse[1], fine[3]);
  EXPECT_THROW(partial_sums(x, {0.0}), invalid_parameter);
}

TEST(Normalization, StrongFormMatchesModerateExponent) {
  for (double d : {-0.3, 0.2, 0.7}) {
    for (double alpha : {1.5, 2.0}) {
      const double ls = 1.7;
      const std::size_t N = 12345;
      const double a = regime_normalization(Regime::strong, d, alpha).factor(N, ls / N);
      const double b = std::pow(ls, d) * regime_normalization(Regime::moderate, d, alpha).factor(N, ls / N);
      EXPECT_NEAR(a / b, 1.0, 1e-13);
    }
  }
}

TEST(NormalizedSums, DonskerCase) {
  McOptions opt;
  opt.replicates = 4000;
  opt.seed = 31;
  const auto ns = normalized_sums_mc(fn(0.0), TemperingScheme::power(2.0), InnovationLaw::gaussian(1.0), 10000, {0.5, 1.0}, opt);
  EXPECT_LT(ks_one_sample(ns.column(1), normal_cdf), 0.05);
}

TEST(NormalizedSums, ModerateVariance) {
  McOptions opt;
  opt.replicates = 2000;
  opt.seed = 32;
  const std::size_t N = 4000;
  const auto ns = normalized_sums_mc(fn(0.3), TemperingScheme::moderate(1.0), InnovationLaw::gaussian(1.0), N, {1.0}, opt);
  const double v = variance(ns.column(0));
  const double target = limit_variance(Regime::moderate, 0.3, 1.0, 1.0);
  EXPECT_NEAR(v / target, 1.0, 0.08);
}

TEST(NormalizedSums, StrongVariance) {
  McOptions opt;
  opt.replicates = 2000;
  opt.seed = 33;
  const auto ns = normalized_sums_mc(fn(0.3), TemperingScheme::power(0.5), InnovationLaw::gaussian(1.0), 10000, {1.0}, opt);
  EXPECT_NEAR(variance(ns.column(0)), 1.0, 0.08);
}

TEST(NormalizedSums, WorkerCountDoesNotChangeResults) {
  McOptions opt;
  opt.replicates = 40;
  opt.seed = 34;
  opt.workers = 1;
  const auto a = normalized_sums_mc(fn(0.2), TemperingScheme::moderate(1.0), InnovationLaw::gaussian(1.0), 500, {0.5, 1.0}, opt);
  opt.workers = 3;
  const auto b = normalized_sums_mc(fn(0.2), TemperingScheme::moderate(1.0), InnovationLaw::gaussian(1.0), 500, {0.5, 1.0}, opt);
  EXPECT_EQ(a.replicates, b.replicates);
}

TEST(KsAgainstLimit, Extremes) {
  NormalizedSums ns;
  ns.t_grid = {1.0};
  ns.regime = Regime::strong;
  std::vector<double> s(1000);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = static_cast<double>(i);
    ns.replicates.push_back({s[i]});
  }
  EXPECT_EQ(ks_against_limit(ns, 1.0, s), 0.0);
  std::vector<double> far(1000, 1e6);
  EXPECT_EQ(ks_against_limit(ns, 1.0, far), 1.0);
  EXPECT_THROW(ks_against_limit(ns, 1.0, std::vector<double>(10, 0.0)), insufficient_replicates);
}

TEST(KsAgainstLimit, LimitSampleVariance) {
  McOptions opt;
  opt.replicates = 4000;
  opt.seed = 35;
  const auto z = limit_marginal_sample(Regime::moderate, 0.3, 1.0, InnovationLaw::gaussian(1.0), 1.0, opt);
  const double target = std::pow(gamma_fn(1.3), 2) * limit_variance(Regime::moderate, 0.3, 1.0, 1.0);
  EXPECT_NEAR(variance(z) / target, 1.0, 4 * std::sqrt(2.0 / 4000));
}

TEST(WeightedSums, IdenticalFunctionsGiveZero) {
  WeightFunctionPair w;
  w.g_tilde = [](double x) { return std::exp(-x * x); };
  w.g_limit = w.g_tilde;
  w.N = 100;
  w.lower = -3.0;
  EXPECT_EQ(weighted_sum_gap(w), 0.0);
}

TEST(WeightedSums, GapShrinksWithN) {
  // strong-regime gap decays like N^{-(1-c)/2} for lambda_N = N^{-c}
  for (const auto& scheme : {TemperingScheme::power(0.3), TemperingScheme::moderate(1.0)}) {
    std::vector<double> gaps;
    for (std::size_t N : {100u, 1000u, 10000u}) gaps.push_back(weighted_sum_gap(make_weight_pair(fn(0.3), scheme, 2.0, N, 1.0)));
    EXPECT_GT(gaps[0], gaps[1]) << scheme.description;
    EXPECT_GT(gaps[1], gaps[2]) << scheme.description;
    EXPECT_LT(gaps[2], gaps[0] / 3) << scheme.description << " " << gaps[0] << " " << gaps[2];
  }
}
