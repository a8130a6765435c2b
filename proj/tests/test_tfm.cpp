#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "artfima/stats.hpp"
#include "artfima/tfm.hpp"

using namespace artfima;

TEST(Kernel, ZeroAtTimeZero) {
  EXPECT_EQ(kernel_h({0.8, 2.0, 1.0}, 0.0, -0.3), 0.0);
  EXPECT_EQ(kernel_h_closed({0.3, 2.0, 1.0}, 0.0, 0.0), 0.0);
  EXPECT_EQ(kernel_h_closed({0.8, 2.0, 1.0}, 1.0, 1.5), 0.0);
}

TEST(Kernel, RepresentationsAgree) {
  const KernelParams cases[] = {{0.8, 2.0, 1.0}, {0.3, 2.0, 1.0}, {0.9, 1.5, 1.0}, {0.4, 1.5, 0.2}, {0.75, 2.0, 0.0}};
  for (const auto& k : cases) {
    for (double t : {0.25, 1.0}) {
      for (double y : {-7.0, -1.0, -0.3, -1e-3, 1e-3, 0.1, 0.2, 0.9 * t}) {
        if (k.lambda == 0.0 && k.H > 0.5 && y == -7.0) continue;
        const double a = kernel_h(k, t, y);
        const double b = kernel_h_integral(k, t, y);
        const double c = kernel_h_closed(k, t, y);
        const double scale = std::max(1.0, std::abs(a));
        EXPECT_NEAR(a, b, 1e-8 * scale) << k.H << " " << k.alpha << " " << t << " " << y;
        EXPECT_NEAR(a, c, 1e-8 * scale) << k.H << " " << k.alpha << " " << t << " " << y;
      }
    }
  }
}

TEST(Kernel, SingularPoints) {
  EXPECT_THROW(kernel_h_closed({0.3, 2.0, 1.0}, 1.0, 0.0), singular_point);
  EXPECT_THROW(kernel_h_closed({0.3, 2.0, 1.0}, 1.0, 1.0), singular_point);
  EXPECT_NO_THROW(kernel_h_closed({0.8, 2.0, 1.0}, 1.0, 0.0));
  EXPECT_THROW(kernel_h_closed({1.2, 2.0, 0.0}, 1.0, 0.5), invalid_parameter);
  EXPECT_THROW(kernel_h_closed({0.7, 0.9, 1.0}, 1.0, 0.5), invalid_parameter);
}

TEST(Covariance, UntemperedIsScaledFbm) {
  for (double H : {0.3, 0.7}) {
    const double c2 = tfbm2_fbm_constant(H);
    for (auto [s, t] : {std::pair{0.5, 1.0}, std::pair{1.0, 1.0}, std::pair{0.2, 0.9}}) {
      const double v = tfbm2_covariance(H, 0.0, s, t);
      EXPECT_NEAR(v / (c2 * fbm_covariance(H, s, t)), 1.0, 1e-6) << H << " " << s << " " << t;
    }
  }
}

TEST(Covariance, Scaling) {
  // B(ct) has the law of c^H B(t) with lambda replaced by c lambda
  const double H = 0.7, lam = 1.0, c = 2.0, t = 0.4;
  EXPECT_NEAR(tfbm2_variance(H, lam, c * t), std::pow(c, 2 * H) * tfbm2_variance(H, c * lam, t), 1e-6);
  EXPECT_NEAR(tfbm2_covariance(H, lam, c * t, c * 0.25), std::pow(c, 2 * H) * tfbm2_covariance(H, c * lam, t, 0.25),
              1e-6);
}

TEST(Covariance, StationaryIncrements) {
  const double H = 0.3, lam = 0.5;
  const double s = 0.3, t = 0.8;
  const double inc = tfbm2_variance(H, lam, t) + tfbm2_variance(H, lam, s) - 2 * tfbm2_covariance(H, lam, s, t);
  EXPECT_NEAR(inc, tfbm2_variance(H, lam, t - s), 1e-8);
}

TEST(Covariance, BrownianCase) {
  // H = 1/2: B^{II} is standard Brownian motion times e^{-lambda}-free constant 1
  for (double lam : {0.0, 1.0}) {
    if (lam > 0) continue;
    EXPECT_NEAR(tfbm2_covariance(0.5, lam, 0.3, 0.7), 0.3, 1e-8);
  }
}

TEST(Covariance, PositiveDefiniteOnGrids) {
  std::vector<double> grid;
  for (int i = 1; i <= 64; ++i) grid.push_back(i / 64.0);
  for (double H : {0.3, 0.5, 0.7, 1.2}) {
    for (double lam : {0.5, 1.0, 5.0}) {
      const auto C = tfbm2_covariance_matrix(H, lam, grid);
      EXPECT_NO_THROW(GaussianPathSampler{C}) << H << " " << lam;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
      EXPECT_GT(es.eigenvalues().minCoeff(), -1e-10 * es.eigenvalues().maxCoeff()) << H << " " << lam;
    }
  }
}

TEST(Limit, SchemesAgreeInVariance) {
  const KernelParams k{0.7, 2.0, 1.0};
  const std::vector<double> grid{0.0, 0.5, 1.0};
  LimitSimulator a(k, grid, LimitScheme::covariance_factorization);
  LimitSimulator b(k, grid, LimitScheme::kernel_discretization);
  EXPECT_TRUE(b.warnings().empty());
  const std::size_t reps = 10000;
  std::vector<double> va(reps), vb(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    RngStream r1(21, i), r2(22, i);
    va[i] = a.sample(r1).values[2];
    vb[i] = b.sample(r2).values[2];
  }
  const double g = gamma_fn(k.H + 0.5);
  const double exact = g * g * tfbm2_variance(k.H, k.lambda, 1.0);
  const double sa = variance(va), sb = variance(vb);
  const double se = exact * std::sqrt(2.0 / reps);
  EXPECT_NEAR(sa, exact, 4 * se);
  EXPECT_NEAR(sb, exact, 4 * se);
  EXPECT_LT(ks_two_sample(va, vb), 0.03);
}

TEST(Limit, StableCharacteristicFunction) {
  const KernelParams k{0.9, 1.5, 1.0};
  const std::vector<double> grid{1.0};
  LimitOptions opt;
  opt.sigma = 1.0;
  opt.beta = 0.5;
  opt.mesh = 1.0 / 256;
  LimitSimulator sim(k, grid, LimitScheme::kernel_discretization, opt);
  const std::size_t reps = 20000;
  std::vector<double> x(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    RngStream r(23, i);
    x[i] = sim.sample(r).values[0];
  }
  for (double th : {0.3, 1.0}) {
    const auto cf = limit_characteristic_function(k, 1.0, th, opt.sigma, opt.beta);
    const auto emp = empirical_cf(x, th);
    EXPECT_NEAR(emp.value.real(), cf.real(), 4 * emp.se_re + 0.005) << th;
    EXPECT_NEAR(emp.value.imag(), cf.imag(), 4 * emp.se_im + 0.005) << th;
  }
}

TEST(Limit, Validation) {
  RngStream r(1, 0);
  EXPECT_THROW(simulate_limit({0.7, 1.5, 1.0}, {0.5, 1.0}, LimitScheme::covariance_factorization, r), invalid_parameter);
  EXPECT_THROW(simulate_limit({0.7, 2.0, 1.0}, {1.5}, LimitScheme::covariance_factorization, r), invalid_parameter);
  auto p = simulate_limit({0.7, 2.0, 1.0}, {0.0, 1.0}, LimitScheme::covariance_factorization, r);
  EXPECT_EQ(p.values[0], 0.0);
}
