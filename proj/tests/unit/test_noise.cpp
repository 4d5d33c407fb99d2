// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "t2certify/error.hpp"
#include "t2certify/noise.hpp"

using namespace t2c;

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, KnownAnswerZero) {
  const auto r = philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(r, (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto r = philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                               {0xffffffff, 0xffffffff});
  EXPECT_EQ(r, (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
  const auto r = philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                               {0xa4093822, 0x299f31d0});
  EXPECT_EQ(r, (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(NoiseSource, SlicesAgreeWithWholeStream) {
  const NoiseSource noise(42, 7);
  std::vector<double> whole(101);
  noise.standard_normals(0, whole);
  for (std::uint64_t first : {0u, 1u, 2u, 33u, 99u}) {
    std::vector<double> part(2);
    noise.standard_normals(first, part);
    EXPECT_EQ(part[0], whole[first]);
    EXPECT_EQ(part[1], whole[first + 1]);
  }
}

TEST(NoiseSource, StreamsAndSeedsDiffer) {
  std::vector<double> a(8), b(8), c(8);
  NoiseSource(1, 0).standard_normals(0, a);
  NoiseSource(1, 1).standard_normals(0, b);
  NoiseSource(2, 0).standard_normals(0, c);
  EXPECT_NE(a, b);
  EXPECT_NE(a, c);
  std::vector<double> s0(8), s1(8);
  NoiseSource(1, 0).substream(0).standard_normals(0, s0);
  NoiseSource(1, 0).substream(1).standard_normals(0, s1);
  EXPECT_NE(s0, s1);
}

TEST(NoiseSource, NormalMomentsWithinClt) {
  const std::size_t n = 1u << 20;
  std::vector<double> z(n);
  NoiseSource(2024, 3).standard_normals(0, z);
  double m = 0, m2 = 0, m4 = 0;
  for (double v : z) {
    m += v;
    m2 += v * v;
    m4 += v * v * v * v;
  }
  m /= n;
  m2 /= n;
  m4 /= n;
  const double se = 1.0 / std::sqrt(static_cast<double>(n));
  EXPECT_LT(std::abs(m), 5 * se);
  EXPECT_LT(std::abs(m2 - 1.0), 5 * std::sqrt(2.0) * se);
  EXPECT_LT(std::abs(m4 - 3.0), 5 * std::sqrt(96.0) * se);
}

TEST(NoiseSource, UniformsInUnitInterval) {
  std::vector<double> u(100000);
  NoiseSource(5, 5).uniforms(0, u);
  double mean = 0;
  for (double v : u) {
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    mean += v;
  }
  mean /= static_cast<double>(u.size());
  EXPECT_NEAR(mean, 0.5, 5 * std::sqrt(1.0 / 12.0 / 100000.0));
}

TEST(BrownianIncrements, ScaledByRootDt) {
  const TimeGrid grid(2.0, 8);
  const NoiseSource noise(9, 1);
  const auto dw = brownian_increments(noise, grid, 3);
  ASSERT_EQ(dw.size(), 24u);
  std::vector<double> z(24);
  noise.standard_normals(0, z);
  for (std::size_t i = 0; i < 24; ++i) EXPECT_DOUBLE_EQ(dw[i], z[i] * std::sqrt(0.25));
  EXPECT_THROW(brownian_increments(noise, grid, 0), ConfigError);
}
