#include <gtest/gtest.h>

#include <cmath>

#include "artfima/coefficients.hpp"

using namespace artfima;

namespace {
ArtfimaModel arma11(double d, double lambda) {
  ArtfimaModel m;
  m.arma.phi = {0.5};
  m.arma.theta = {0.3};
  m.d = d;
  m.lambda = lambda;
  return m;
}
}  // namespace

TEST(Omega, SmallCases) {
  auto s = omega_coeffs(0.4, 2);
  ASSERT_EQ(s.values.size(), 3u);
  EXPECT_DOUBLE_EQ(s.values[0], 1.0);
  EXPECT_DOUBLE_EQ(s.values[1], 0.4);
  EXPECT_NEAR(s.values[2], 0.28, 1e-16);
  for (double v : omega_coeffs(1.0, 4).values) EXPECT_DOUBLE_EQ(v, 1.0);
  auto delta = omega_coeffs(0.0, 3).values;
  EXPECT_EQ(delta, (std::vector<double>{1, 0, 0, 0}));
}

TEST(Omega, MatchesGammaRatio) {
  const auto v = omega_coeffs(0.4, 50).values;
  const double ref = std::exp(std::lgamma(50.4) - std::lgamma(51.0) - std::lgamma(0.4));
  EXPECT_NEAR(v[50] / ref, 1.0, 1e-12);
}

TEST(Omega, SignPattern) {
  for (double v : omega_coeffs(0.3, 2000).values) EXPECT_GT(v, 0.0);
  const auto neg = omega_coeffs(-0.6, 2000).values;
  for (std::size_t k = 1; k < neg.size(); ++k) EXPECT_LT(neg[k], 0.0);
}

TEST(Omega, GeneratingFunction) {
  const double lam = 0.1, d = 0.3;
  auto v = omega_coeffs(d, 10000).values;
  detail::compensated_sum s;
  for (std::size_t k = 0; k < v.size(); ++k) s.add(std::exp(-lam * k) * v[k]);
  EXPECT_NEAR(s.value() / std::pow(-std::expm1(-lam), -d), 1.0, 1e-6);
}

TEST(Psi, SmallCases) {
  EXPECT_EQ(arma_psi({}, 3).values, (std::vector<double>{1, 0, 0, 0}));
  auto g = arma_psi({{0.5}, {}}, 3).values;
  EXPECT_DOUBLE_EQ(g[1], 0.5);
  EXPECT_DOUBLE_EQ(g[2], 0.25);
  EXPECT_DOUBLE_EQ(g[3], 0.125);
  auto h = arma_psi({{0.5}, {0.3}}, 2).values;
  EXPECT_DOUBLE_EQ(h[1], 0.8);
  EXPECT_DOUBLE_EQ(h[2], 0.4);
}

TEST(Psi, DecayCutoff) {
  auto v = arma_psi({{0.5}, {0.3}}, 200).values;
  EXPECT_EQ(v[200], 0.0);
  EXPECT_GT(std::abs(v[40]), 0.0);
}

TEST(Arma, RootChecks) {
  ArmaPolynomials unit{{1.0}, {}};
  EXPECT_THROW(unit.validate(), invalid_parameter);
  ArmaPolynomials common{{0.5}, {-0.5}};
  EXPECT_THROW(common.validate(), invalid_parameter);
  ArmaPolynomials zero_at_one{{}, {-1.0}};
  EXPECT_THROW(zero_at_one.validate(), invalid_parameter);
  ArmaPolynomials ok{{0.5, -0.2}, {0.3}};
  EXPECT_NO_THROW(ok.validate());
  EXPECT_NEAR(ok.phi_at_one(), 0.7, 1e-15);
  EXPECT_NEAR(ok.theta_at_one(), 1.3, 1e-15);
}

TEST(Artfima, ReducesToOmegaAndTempers) {
  ArtfimaModel m;
  m.d = 0.4;
  auto a = artfima_coeffs(m, 2);
  EXPECT_EQ(a.kind, CoefficientKind::a);
  EXPECT_NEAR(a.values[2], 0.28, 1e-16);
  m.lambda = 0.1;
  auto t = artfima_coeffs(m, 2);
  EXPECT_EQ(t.kind, CoefficientKind::tempered_a);
  EXPECT_NEAR(t.values[2], 0.28 * std::exp(-0.2), 1e-16);
}

TEST(Artfima, AsymptoticBand) {
  // |ratio - 1| <= 5 c / k with c calibrated at k = 100 from this same computation.
  for (double d : {-0.4, 0.25, 0.75}) {
    const auto m = arma11(d, 0.0);
    const auto v = artfima_coeffs(m, 10000).values;
    auto ratio = [&](std::size_t k) {
      return v[k] * m.arma.phi_at_one() * std::tgamma(d) / (m.arma.theta_at_one() * std::pow(double(k), d - 1));
    };
    const double c = std::abs(ratio(100) - 1.0) * 100.0;
    EXPECT_LT(c, 10.0) << d;
    for (std::size_t k : {200u, 500u, 1000u, 5000u, 10000u}) EXPECT_LE(std::abs(ratio(k) - 1.0), 5.0 * c / k) << d;
    EXPECT_NEAR(ratio(10000), 1.0, 0.02) << d;
  }
}

TEST(Inverse, SmallCases) {
  ArtfimaModel m;
  EXPECT_EQ(inverse_coeffs(m, 3).values, (std::vector<double>{1, 0, 0, 0}));
  m.d = 0.4;
  auto v = inverse_coeffs(m, 2).values;
  EXPECT_DOUBLE_EQ(v[1], -0.4);
  EXPECT_NEAR(v[2], -0.12, 1e-16);
}

TEST(Inverse, RoundTripIsIdentity) {
  for (std::size_t n : {50u, 500u}) {
    auto m = arma11(0.25, 0.05);
    auto fwd = artfima_coeffs(m, n).values;
    auto inv = inverse_coeffs(m, n).values;
    temper_in_place(inv, m.lambda);
    for (std::size_t k = 0; k <= n; ++k) {
      double s = 0;
      for (std::size_t j = 0; j <= k; ++j) s += fwd[j] * inv[k - j];
      EXPECT_NEAR(s, k == 0 ? 1.0 : 0.0, 1e-10) << k;
    }
  }
}

TEST(Inverse, NonInvertibleRejected) {
  ArtfimaModel m;
  m.arma.theta = {1.0};
  EXPECT_THROW(inverse_coeffs(m, 10), non_invertible);
}

TEST(Moments, DecayForNegativeOrders) {
  ArtfimaModel m;
  m.d = -0.4;
  auto s = artfima_coeffs(m, 1000000);
  auto r = check_moment_conditions(s, m.d);
  ASSERT_EQ(r.orders.size(), 1u);
  EXPECT_TRUE(r.ok);
  EXPECT_LT(std::abs(r.partial_sums[0].back()), 10.0 * std::pow(1e6, m.d));

  m.d = -1.5;
  auto s2 = artfima_coeffs(m, 100000);
  auto r2 = check_moment_conditions(s2, m.d);
  ASSERT_EQ(r2.orders.size(), 2u);
  EXPECT_TRUE(r2.decaying[0]);
  EXPECT_TRUE(r2.decaying[1]);

  ArtfimaModel pos;
  pos.d = 0.3;
  EXPECT_THROW(check_moment_conditions(artfima_coeffs(pos, 10), 0.3), invalid_parameter);
}
