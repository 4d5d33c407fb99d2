// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "t2certify/sde.hpp"
#include "t2certify/stats.hpp"

namespace t2c {

// max_k |p1(t_k) - p2(t_k)|. Throws std::invalid_argument on grid mismatch.
double sup_norm_distance(const PathSample& p1, const PathSample& p2);

// Dense N x N cost matrix, row-major.
class CostMatrix {
 public:
  CostMatrix(std::size_t size, std::vector<double> values);
  explicit CostMatrix(std::size_t size) : CostMatrix(size, std::vector<double>(size * size)) {}

  std::size_t size() const noexcept { return size_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * size_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * size_ + j]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t size_;
  std::vector<double> values_;
};

// c_ij = sup_norm_distance(mu_i, nu_j)^2. Rows are filled in parallel.
CostMatrix squared_sup_cost(std::span<const PathSample> mu, std::span<const PathSample> nu,
                            std::size_t workers = 1);

struct Assignment {
  std::vector<std::size_t> column_of_row;
  double total_cost = 0.0;  // summed in row order
};

// Exact minimum-cost perfect matching by shortest augmenting paths with dual
// potentials, O(N^3).
Assignment solve_assignment(const CostMatrix& cost);

inline constexpr std::size_t kDefaultAssignmentCap = 4096;

// sqrt of the optimal mean squared sup-norm cost between two equal-size
// empirical measures. Throws std::invalid_argument on size mismatch or when
// N exceeds `cap` (use batched_w2_estimate).
double empirical_w2(std::span<const PathSample> mu, std::span<const PathSample> nu,
                    std::size_t cap = kDefaultAssignmentCap, std::size_t workers = 1);

// Mean and standard error of empirical_w2 over `rounds` disjoint sub-batches
// of size `batch`.
McEstimate batched_w2_estimate(std::span<const PathSample> mu, std::span<const PathSample> nu,
                               std::size_t batch, std::size_t rounds, std::size_t workers = 1);

}  // namespace t2c
