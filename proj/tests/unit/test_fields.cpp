// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "t2certify/error.hpp"
#include "t2certify/fields.hpp"
#include "t2certify/linalg.hpp"
#include "t2certify/time_grid.hpp"

using namespace t2c;

TEST(TimeGrid, LastNodeIsHorizon) {
  const TimeGrid g(0.3, 7);
  EXPECT_EQ(g.time(7), 0.3);
  EXPECT_EQ(g.nodes(), 8u);
  EXPECT_DOUBLE_EQ(g.dt(), 0.3 / 7);
  EXPECT_THROW(TimeGrid(1.0, 0), ConfigError);
  EXPECT_THROW(TimeGrid(0.0, 10), ConfigError);
}

TEST(DriftField, SignIsZeroAtOrigin) {
  const DriftField b = DriftField::sign(2, 1.5);
  std::vector<double> out(2);
  b(0.0, std::vector<double>{0.0, -3.0}, out);
  EXPECT_EQ(out[0], 0.0);
  EXPECT_EQ(out[1], -1.5);
  EXPECT_DOUBLE_EQ(*b.sup_bound(), 1.5 * std::sqrt(2.0));
  EXPECT_FALSE(b.is_zero());
  EXPECT_TRUE(DriftField::zero(3).is_zero());
}

TEST(DriftField, RegimeSwitchingOnFirstCoordinate) {
  const DriftField b = DriftField::regime_switching({1.0, 2.0}, {-1.0, 0.5}, 0.25);
  std::vector<double> out(2);
  b(0.0, std::vector<double>{0.0, 9.0}, out);
  EXPECT_EQ(out, (std::vector<double>{1.0, 2.0}));
  b(0.0, std::vector<double>{0.25, 9.0}, out);
  EXPECT_EQ(out, (std::vector<double>{-1.0, 0.5}));
  EXPECT_THROW(DriftField::regime_switching({1.0}, {1.0, 2.0}), ConfigError);
}

TEST(Integrability, Admissibility) {
  EXPECT_TRUE((Integrability{8.0, 8.0}.admissible(1)));
  EXPECT_FALSE((Integrability{3.0, 8.0}.admissible(1)));  // p < 2(d+1)
  EXPECT_FALSE((Integrability{8.0, 2.0}.admissible(1)));  // q not > 2
  EXPECT_FALSE((Integrability{6.0, 3.0}.admissible(2)));  // d/p + 2/q = 1
}

TEST(DiffusionField, DiagonalTimeAuditsClean) {
  const auto sigma = DiffusionField::diagonal_time(
      2, [](std::size_t i, double t) { return 1.0 + 0.5 * std::sin(t + static_cast<double>(i)); },
      0.5, 1.5);
  const DriftField b = DriftField::constant({0.3, -0.4});
  std::vector<double> pts;
  for (int k = 0; k < 50; ++k) {
    pts.push_back(0.1 * k);
    pts.push_back(k - 25.0);
    pts.push_back(0.5 * k);
  }
  const FieldAudit a = audit_fields(b, sigma, pts);
  EXPECT_LE(a.worst_drift_excess, 1e-15);
  EXPECT_LE(a.worst_sigma_norm_excess, 1e-15);
  EXPECT_LE(a.worst_ellipticity_deficit, 1e-15);
}

TEST(Linalg, KnownMatrices) {
  // [[3, 0], [4, 5]] has singular values 3*sqrt(5) and sqrt(5).
  const std::vector<double> m = {3, 0, 4, 5};
  EXPECT_NEAR(linalg::spectral_norm(m, 2), 3 * std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(linalg::smallest_singular_value(m, 2), std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(linalg::frobenius_norm(m), std::sqrt(50.0), 1e-14);
  // Symmetric part [[3, 2], [2, 5]]: eigenvalues 4 -+ sqrt(5).
  EXPECT_NEAR(linalg::ellipticity(m, 2), 4 - std::sqrt(5.0), 1e-12);
  std::vector<double> out(2);
  linalg::matvec(m, std::vector<double>{1, 2}, out);
  EXPECT_EQ(out, (std::vector<double>{3, 14}));
}
