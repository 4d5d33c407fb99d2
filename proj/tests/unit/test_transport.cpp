// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "t2certify/transport.hpp"

using namespace t2c;

namespace {

std::vector<PathSample> random_paths(std::mt19937_64& rng, std::size_t count, const TimeGrid& g,
                                     std::size_t dim) {
  std::normal_distribution<double> normal;
  std::vector<PathSample> out;
  for (std::size_t i = 0; i < count; ++i) {
    PathSample p(g, dim);
    for (double& v : p.values()) v = normal(rng);
    out.push_back(std::move(p));
  }
  return out;
}

// Minimum over all N! permutations, summing in row order.
double brute_force(const CostMatrix& c) {
  std::vector<std::size_t> perm(c.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = INFINITY;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) s += c(i, perm[i]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST(Assignment, MatchesPermutationEnumeration) {
  std::mt19937_64 rng(12345);
  const TimeGrid g(1.0, 5);
  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t n = 1 + static_cast<std::size_t>(instance % 6);
    const std::size_t dim = 1 + static_cast<std::size_t>(instance % 2);
    const auto mu = random_paths(rng, n, g, dim);
    const auto nu = random_paths(rng, n, g, dim);
    const CostMatrix c = squared_sup_cost(mu, nu);
    const double oracle = brute_force(c);
    EXPECT_EQ(solve_assignment(c).total_cost, oracle) << "instance " << instance;
    EXPECT_EQ(empirical_w2(mu, nu), std::sqrt(oracle / static_cast<double>(n)));
  }
}

TEST(Assignment, IsAPermutation) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  const std::size_t n = 60;
  CostMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c(i, j) = std::floor(u(rng));  // many ties
  const Assignment a = solve_assignment(c);
  std::vector<std::size_t> cols = a.column_of_row;
  std::sort(cols.begin(), cols.end());
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(cols[i], i);
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += c(i, a.column_of_row[i]);
  EXPECT_EQ(s, a.total_cost);
}

TEST(EmpiricalW2, MetricProperties) {
  std::mt19937_64 rng(99);
  const TimeGrid g(1.0, 20);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_paths(rng, 12, g, 2);
    const auto b = random_paths(rng, 12, g, 2);
    const auto c = random_paths(rng, 12, g, 2);
    EXPECT_EQ(empirical_w2(a, a), 0.0);
    EXPECT_NEAR(empirical_w2(a, b), empirical_w2(b, a), 1e-9);
    EXPECT_LE(empirical_w2(a, c), empirical_w2(a, b) + empirical_w2(b, c) + 1e-9);
  }
}

TEST(EmpiricalW2, TranslationByConstantPath) {
  std::mt19937_64 rng(3);
  const TimeGrid g(1.0, 10);
  const auto a = random_paths(rng, 30, g, 1);
  std::vector<PathSample> b = a;
  for (auto& p : b)
    for (double& v : p.values()) v += 0.75;
  // The identity matching costs exactly 0.75^2 per pair; the optimum can only be lower.
  EXPECT_LE(empirical_w2(a, b), 0.75 + 1e-12);
  EXPECT_GT(empirical_w2(a, b), 0.0);
}

TEST(EmpiricalW2, Errors) {
  std::mt19937_64 rng(1);
  const auto a = random_paths(rng, 4, TimeGrid(1.0, 3), 1);
  const auto b = random_paths(rng, 4, TimeGrid(1.0, 4), 1);
  EXPECT_THROW(sup_norm_distance(a[0], b[0]), std::invalid_argument);
  EXPECT_THROW(empirical_w2(a, std::span<const PathSample>(a).first(3)), std::invalid_argument);
  EXPECT_THROW(empirical_w2(a, a, 3), std::invalid_argument);
}

TEST(BatchedW2, IndependentOfWorkerCount) {
  std::mt19937_64 rng(5);
  const TimeGrid g(1.0, 16);
  const auto a = random_paths(rng, 64, g, 2);
  const auto b = random_paths(rng, 64, g, 2);
  const McEstimate one = batched_w2_estimate(a, b, 16, 4, 1);
  const McEstimate many = batched_w2_estimate(a, b, 16, 4, 3);
  EXPECT_EQ(one.mean, many.mean);
  EXPECT_EQ(one.stderr_, many.stderr_);
  EXPECT_EQ(one.count, 4u);
  EXPECT_THROW(batched_w2_estimate(a, b, 16, 5), std::invalid_argument);
}
