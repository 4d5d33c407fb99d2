// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "t2certify/error.hpp"
#include "t2certify/zvonkin.hpp"

using namespace t2c;

namespace {

ZvonkinConfig config(DriftField b, DiffusionField s, double c_b) {
  ZvonkinConfig cfg{std::move(b), std::move(s)};
  cfg.c_b = c_b;
  return cfg;
}

}  // namespace

// With constant drift c the solution is spatially flat, u = c (T - t) / (1 + C_b),
// and it satisfies the Neumann condition, so the scheme reproduces it exactly.
TEST(ZvonkinSolve, ConstantDriftOneDimension) {
  const PdeGrid grid(1, 2.0, 0.1, TimeGrid(0.5, 20));
  const VectorField u = zvonkin_solve(config(DriftField::constant({0.8}), DiffusionField::identity(1, 1.3), 3.0), grid);
  for (std::size_t k = 0; k < grid.time().nodes(); ++k) {
    const double expected = 0.8 * (0.5 - grid.time().time(k)) / 4.0;
    for (double v : u.level(0, k)) EXPECT_NEAR(v, expected, 1e-13);
  }
}

TEST(ZvonkinSolve, ConstantDriftTwoDimensionsWithCorrelation) {
  const PdeGrid grid(2, 1.0, 0.1, TimeGrid(0.4, 16));
  const auto sigma = DiffusionField::constant(2, {1.0, 0.0, 0.6, 0.8});
  const VectorField u = zvonkin_solve(config(DriftField::constant({0.5, -1.0}), sigma, 1.0), grid);
  for (std::size_t k = 0; k < grid.time().nodes(); ++k) {
    const double tau = 0.4 - grid.time().time(k);
    for (double v : u.level(0, k)) EXPECT_NEAR(v, 0.5 * tau / 2.0, 1e-13);
    for (double v : u.level(1, k)) EXPECT_NEAR(v, -1.0 * tau / 2.0, 1e-13);
  }
  const GradientCheck g = gradient_bound_check(u, 1.0, 0.0, 0.0);
  EXPECT_LT(g.sup_grad, 1e-11);
  EXPECT_TRUE(g.pass);
}

TEST(ZvonkinSolve, RejectsBadConfigs) {
  const PdeGrid g1(1, 2.0, 0.1, TimeGrid(0.5, 10));
  EXPECT_THROW(zvonkin_solve(config(DriftField::sign(2), DiffusionField::identity(1), 1.0), g1),
               ConfigError);
  auto cfg = config(DriftField::sign(1), DiffusionField::identity(1), 1.0);
  cfg.theorem_case = TheoremCase::integrable_drift;
  EXPECT_THROW(zvonkin_solve(cfg, g1), ConfigError);  // no exponents declared
  cfg.drift.with_integrability({8.0, 8.0});
  EXPECT_NO_THROW(zvonkin_solve(cfg, g1));
  EXPECT_THROW(PdeGrid(3, 1.0, 0.1, TimeGrid(1.0, 1)), ConfigError);
  EXPECT_THROW(PdeGrid(1, 1.0, 0.3, TimeGrid(1.0, 1)), ConfigError);
}

// Away from the drift jump the consistency residual falls at second order.
TEST(ZvonkinSolve, ResidualConvergesForSignDrift) {
  double previous = 0.0;
  for (double h : {0.04, 0.02}) {
    const auto n = static_cast<std::size_t>(std::lround(5.0 / h));
    const PdeGrid grid(1, 4.0, h, TimeGrid(0.5, n));
    const auto cfg = config(DriftField::sign(1), DiffusionField::identity(1), 2.0);
    const VectorField u = zvonkin_solve(cfg, grid);
    const ResidualReport r = pde_residual(u, cfg, {1.0, 0.025});
    EXPECT_GT(r.checked, 0u);
    EXPECT_GT(r.excluded_discontinuity, 0u);
    if (previous > 0.0) EXPECT_GE(previous / r.max_abs, 3.0);
    previous = r.max_abs;
  }
}

TEST(GradientControl, DoublesUntilBoundHolds) {
  const PdeGrid grid(1, 4.0, 0.04, TimeGrid(0.5, 125));
  const auto cfg = config(DriftField::sign(1), DiffusionField::identity(1), 0.0);
  const ControlledSolve s = solve_with_gradient_control(cfg, grid, 0.1, 1.0);
  // C_b runs 0, 1, 2: sup |u'| (1 + C_b) is about 1.69 here.
  EXPECT_EQ(s.c_b, 2.0);
  EXPECT_EQ(s.rounds, 3u);
  EXPECT_TRUE(s.gradient.pass);
  EXPECT_THROW(solve_with_gradient_control(cfg, grid, 0.0, 1.0, 2), NumericalError);
}

TEST(Transform, RoundTripAndBiLipschitz) {
  const PdeGrid grid(1, 4.0, 0.04, TimeGrid(0.5, 125));
  const auto cfg = config(DriftField::sign(1), DiffusionField::identity(1), 2.0);
  const VectorField u = zvonkin_solve(cfg, grid);
  const ZvonkinTransform tr(u, 2.0);
  std::vector<double> y(1), back(1);
  for (double x : {-3.0, -0.5, 0.0, 0.013, 2.7, 5.5, -7.0}) {
    for (double t : {0.0, 0.1234, 0.5}) {
      tr.phi(t, std::vector<double>{x}, y);
      tr.psi(t, y, back, 1e-13);
      EXPECT_NEAR(back[0], x, 1e-10);
    }
  }
  const BiLipschitzReport rep = phi_bilipschitz_check(tr, 2.0, 2000, NoiseSource(1, 2), 1.0, 0.0);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.pairs, 2000u);
  EXPECT_GE(rep.min_ratio, 1.0 / 3.0);
  EXPECT_LE(rep.max_ratio, 5.0 / 3.0);
  const TransformStats st = measure_transform(tr, DiffusionField::identity(1), 1.0);
  EXPECT_GE(st.lip_psi, 1.0 - 1e-12);
  EXPECT_NEAR(st.sup_sigma_tilde, st.lip_phi, 1e-12);
}

TEST(Transform, SigmaTildeIsJacobianTimesSigma) {
  const PdeGrid grid(1, 3.0, 0.05, TimeGrid(0.5, 50));
  const VectorField u = zvonkin_solve(config(DriftField::sign(1), DiffusionField::identity(1, 0.5), 4.0), grid);
  auto tr = std::make_shared<const ZvonkinTransform>(u, 4.0);
  const TransformedDiffusion td = transformed_sigma(DiffusionField::identity(1, 0.5), tr);
  std::vector<double> out(1), x(1), jac(1);
  const double y = 0.7, t = 0.2;
  td.field(t, std::vector<double>{y}, out);
  tr->psi(t, std::vector<double>{y}, x);
  tr->jacobian(t, x, jac);
  EXPECT_NEAR(out[0], 0.5 * jac[0], 1e-14);
  EXPECT_EQ(td.extension_hits->load(), 0u);
  td.field(t, std::vector<double>{50.0}, out);
  EXPECT_EQ(td.extension_hits->load(), 1u);
  EXPECT_DOUBLE_EQ(td.field.sup_bound(), 0.5 * 9.0 / 5.0);
}

TEST(Martingale, BrownianMotionPassesAndDriftFails) {
  const TimeGrid g(0.5, 100);
  MartingaleOptions mo;
  mo.paths = 20000;
  mo.blocks = 5;
  const SpaceTimeMap identity = [](double, std::span<const double> x, std::span<double> out) {
    out[0] = x[0];
  };
  const auto bm = driftless_residual_check(identity, DriftField::zero(1), DiffusionField::identity(1),
                                           std::vector<double>{0.5}, g, NoiseSource(3, 1), mo);
  EXPECT_TRUE(bm.pass);
  EXPECT_EQ(bm.blocks.size(), 5u);
  EXPECT_FALSE(bm.blocks[0].slope_tested);
  EXPECT_TRUE(bm.blocks[1].slope_tested);
  EXPECT_DOUBLE_EQ(bm.per_test_level, 0.01 / 9.0);
  const auto drifted = driftless_residual_check(identity, DriftField::sign(1), DiffusionField::identity(1),
                                                std::vector<double>{0.5}, g, NoiseSource(3, 1), mo);
  EXPECT_FALSE(drifted.pass);
}

TEST(FieldExport, HeaderAndRowCount) {
  const PdeGrid grid(1, 1.0, 0.5, TimeGrid(1.0, 4));
  const VectorField u = zvonkin_solve(config(DriftField::constant({1.0}), DiffusionField::identity(1), 1.0), grid);
  std::ostringstream out;
  export_field_csv(u, out, 2);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x,u1,grad");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3u * 5u);
}
