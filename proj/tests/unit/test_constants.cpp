// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "t2certify/certificate.hpp"
#include "t2certify/constants.hpp"
#include "t2certify/error.hpp"

using namespace t2c;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(T2Constant, FrozenHighPrecisionValue) {
  // 4 exp(3.6) to 40 digits, evaluated with mpmath.
  const double oracle = 146.3929377747119510103790635967346290916;
  const ConstantInputs in{0.1, 1.0, 1.0, 1e-3};
  EXPECT_LE(rel(t2_constant_at(0.5, in), oracle), 1e-12);
}

TEST(T2Constant, ZeroHorizonIsExact) {
  for (double eps : {0.1, 0.25, 0.5, 0.9}) {
    const ConstantInputs in{0.0, 1.7, 2.0, 1e-3};
    EXPECT_DOUBLE_EQ(t2_constant_at(eps, in), 2.0 * 1.7 * 1.7 / (1.0 - eps));
  }
}

TEST(T2Constant, DomainErrors) {
  const ConstantInputs in;
  EXPECT_THROW(t2_constant_at(0.0, in), std::domain_error);
  EXPECT_THROW(t2_constant_at(1.0, in), std::domain_error);
  EXPECT_THROW(optimize_epsilon(ConstantInputs{1.0, 0.0, 2.0, 1e-3}), ConfigError);
}

TEST(T2Constant, LogFormStaysFiniteWhereValueOverflows) {
  const ConstantInputs in{100.0, 1.0, 2.0, 1e-3};
  EXPECT_TRUE(std::isinf(t2_constant_at(0.5, in)));
  EXPECT_TRUE(std::isfinite(log_t2_constant_at(0.5, in)));
}

TEST(OptimizeEpsilon, BeatsDenseGrid) {
  for (double T : {0.05, 0.1, 0.5, 1.0}) {
    for (double cbdg : {0.5, 1.0, 2.0}) {
      const ConstantInputs in{T, 1.0, cbdg, 1e-3};
      const EpsilonOptimum opt = optimize_epsilon(in);
      double best = INFINITY;
      for (int i = 0; i < 10000; ++i) {
        const double eps = in.eps_min + (1.0 - 2.0 * in.eps_min) * i / 9999.0;
        best = std::min(best, t2_constant_at(eps, in));
      }
      EXPECT_LE(opt.constant, best * (1.0 + 1e-12)) << "T=" << T << " C_bdg=" << cbdg;
      EXPECT_FALSE(opt.at_boundary);
    }
  }
}

TEST(OptimizeEpsilon, ZeroHorizonSitsOnBoundary) {
  const EpsilonOptimum opt = optimize_epsilon(ConstantInputs{0.0, 1.0, 2.0, 1e-3});
  EXPECT_TRUE(opt.at_boundary);
  EXPECT_NEAR(opt.constant, 2.0 / (1.0 - 1e-3), 1e-12);
}

TEST(OptimizeEpsilon, MonotoneInInputs) {
  double last = 0.0;
  for (double cbdg : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    const double c = optimize_epsilon(ConstantInputs{0.2, 1.0, cbdg, 1e-3}).constant;
    EXPECT_GT(c, last);
    last = c;
  }
}

TEST(Transfer, LipschitzSquared) {
  EXPECT_DOUBLE_EQ(lipschitz_transfer(3.0, 2.0), 12.0);
  EXPECT_THROW(lipschitz_transfer(3.0, 0.0), std::invalid_argument);
  const ConstantInputs in{0.1, 1.0, 1.0, 1e-3};
  const TheoremConstant tc = theorem_constant(in, 1.5, 2.0);
  ConstantInputs scaled = in;
  scaled.sigma_sup = 2.0;
  EXPECT_DOUBLE_EQ(tc.base.constant, optimize_epsilon(scaled).constant);
  EXPECT_DOUBLE_EQ(tc.constant, tc.base.constant * 2.25);
}

TEST(Certificate, DecisionRule) {
  T2Certificate c;
  c.constant = 2.0;
  c.entropy = {0.5, 0.0, 100};
  c.w2_emp = {1.0, 0.0, 8};
  decide(c);
  EXPECT_TRUE(c.pass);
  EXPECT_DOUBLE_EQ(c.slack_ratio, 1.0);

  c.w2_emp = {1.1, 0.01, 8};  // 1.21 vs 1 + 3 * 2 * 1.1 * 0.01 = 1.066
  decide(c);
  EXPECT_FALSE(c.pass);
  c.w2_emp = {1.1, 0.05, 8};  // 1.21 vs 1 + 0.33
  decide(c);
  EXPECT_TRUE(c.pass);

  c.w2_emp = {0.0, 0.0, 8};
  c.entropy = {0.0, 0.0, 100};
  decide(c);
  EXPECT_TRUE(c.pass);
  EXPECT_TRUE(std::isinf(c.slack_ratio));
}

TEST(Certificate, LargerConstantNeverFlipsPassToFail) {
  T2Certificate c;
  c.entropy = {0.3, 0.01, 100};
  c.w2_emp = {0.9, 0.02, 8};
  bool passed = false;
  for (double C = 0.5; C < 20.0; C *= 1.3) {
    c.constant = C;
    decide(c);
    if (passed) EXPECT_TRUE(c.pass) << C;
    passed = passed || c.pass;
  }
  EXPECT_TRUE(passed);
}
