// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "t2certify/girsanov.hpp"
#include "t2certify/noise.hpp"

using namespace t2c;

namespace {

std::vector<CoupledPaths> batch(const DriftField& b, const DiffusionField& s, const TiltProcess& q,
                                std::vector<double> x0, const TimeGrid& g, std::size_t n,
                                std::uint64_t seed) {
  std::vector<CoupledPaths> out;
  const NoiseSource noise(seed, 0);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(girsanov_coupling(b, s, q, x0, g, noise.substream(i)));
  }
  return out;
}

}  // namespace

TEST(Entropy, ConstantTiltIsExactWithZeroVariance) {
  for (std::uint64_t seed : {1u, 77u, 4096u}) {
    const TimeGrid g(0.8, 200);
    const auto q = TiltProcess::constant({0.6, -0.8});
    const auto pairs =
        batch(DriftField::sign(2), DiffusionField::identity(2), q, {0.0, 0.0}, g, 50, seed);
    const McEstimate h = entropy_of_tilt(q, pairs);
    EXPECT_NEAR(h.mean, 0.5 * 1.0 * 0.8, 1e-14);
    EXPECT_EQ(h.stderr_, 0.0);
  }
}

TEST(Entropy, TimeTiltConvergesAtFirstOrder) {
  // Left-point sum of t^2/2 on [0, 1]: 1/6 - 1/(4n) + 1/(12 n^2).
  double previous_error = 0.0;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    const TimeGrid g(1.0, n);
    const auto q = TiltProcess::linear_in_time({1.0}, 1.0);
    const auto pairs = batch(DriftField::zero(1), DiffusionField::identity(1), q, {0.0}, g, 3, 5);
    const McEstimate h = entropy_of_tilt(q, pairs);
    const double nn = static_cast<double>(n);
    EXPECT_NEAR(h.mean, 1.0 / 6.0 - 1.0 / (4 * nn) + 1.0 / (12 * nn * nn), 1e-13);
    EXPECT_EQ(h.stderr_, 0.0);
    const double err = std::abs(h.mean - 1.0 / 6.0);
    if (previous_error > 0.0) EXPECT_NEAR(previous_error / err, 10.0, 0.1);
    previous_error = err;
  }
}

TEST(Coupling, DriftlessGapIsLinearInTime) {
  const TimeGrid g(2.0, 400);
  const double c = 0.7;
  const auto q = TiltProcess::constant({c});
  const auto pairs = batch(DriftField::zero(1), DiffusionField::identity(1), q, {0.3}, g, 20, 11);
  for (const auto& p : pairs) {
    for (std::size_t k = 0; k <= g.steps(); ++k) {
      EXPECT_NEAR(p.x_path.at(k)[0] - p.y_path.at(k)[0], c * g.time(k), 1e-12);
    }
  }
  const McEstimate d = coupling_sup_distance(pairs);
  EXPECT_NEAR(d.mean, c * c * 4.0, 1e-12);
  EXPECT_LT(d.stderr_, 1e-13);
}

TEST(Coupling, ZeroTiltGivesIdenticalPaths) {
  const TimeGrid g(1.0, 100);
  const auto q = TiltProcess::zero(2);
  const auto pairs =
      batch(DriftField::sign(2), DiffusionField::identity(2), q, {0.1, -0.1}, g, 10, 2);
  EXPECT_EQ(entropy_of_tilt(q, pairs).mean, 0.0);
  EXPECT_EQ(coupling_sup_distance(pairs).mean, 0.0);
}

// Changing the noise after step k0 must not change q on steps <= k0.
TEST(Tilt, PathDependentTiltOnlySeesThePast) {
  const TimeGrid g(1.0, 64);
  const auto q = TiltProcess::lagged_tanh({2.0});
  auto dw = brownian_increments(NoiseSource(8, 8), g, 1);
  const auto a = girsanov_coupling(DriftField::sign(1), DiffusionField::identity(1), q,
                                   std::vector<double>{0.0}, g, dw);
  const std::size_t k0 = 30;
  for (std::size_t k = k0; k < dw.size(); ++k) dw[k] += 1.0;
  const auto b = girsanov_coupling(DriftField::sign(1), DiffusionField::identity(1), q,
                                   std::vector<double>{0.0}, g, dw);
  for (std::size_t k = 0; k <= k0; ++k) EXPECT_EQ(a.q_trace[k], b.q_trace[k]);
  bool changed = false;
  for (std::size_t k = k0 + 1; k < g.steps(); ++k) changed |= a.q_trace[k] != b.q_trace[k];
  EXPECT_TRUE(changed);
}

TEST(Tilt, RuleReceivesPrefixOnly) {
  const TimeGrid g(1.0, 10);
  std::vector<std::size_t> seen;
  const TiltProcess probe(
      2, TiltKind::path_dependent,
      [&seen](double, const PathPrefix& p, std::span<double> out) {
        seen.push_back(p.step());
        out[0] = out[1] = 0.0;
      },
      0.0);
  girsanov_coupling(DriftField::zero(2), DiffusionField::identity(2), probe,
                    std::vector<double>{0, 0}, g, NoiseSource(1, 1));
  ASSERT_EQ(seen.size(), 10u);
  for (std::size_t k = 0; k < 10; ++k) EXPECT_EQ(seen[k], k);
}

TEST(Tilt, BoundsAndNames) {
  EXPECT_DOUBLE_EQ(TiltProcess::linear_in_time({3.0, 4.0}, 2.0).sup_bound(), 10.0);
  EXPECT_EQ(to_string(TiltKind::time_dependent), "time");
  EXPECT_THROW(entropy_of_tilt(TiltProcess::zero(1), std::vector<CoupledPaths>{}),
               std::invalid_argument);
}
