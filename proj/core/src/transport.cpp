// SPDX-License-Identifier: MIT
#include "t2certify/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "t2certify/parallel.hpp"

namespace t2c {
namespace {

double sup_norm_squared(const PathSample& p1, const PathSample& p2) noexcept {
  const auto a = p1.values();
  const auto b = p2.values();
  const std::size_t d = p1.dim();
  double best = 0.0;
  for (std::size_t off = 0; off < a.size(); off += d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += (a[off + i] - b[off + i]) * (a[off + i] - b[off + i]);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

double sup_norm_distance(const PathSample& p1, const PathSample& p2) {
  if (!(p1.grid() == p2.grid()) || p1.dim() != p2.dim()) {
    throw std::invalid_argument("sup_norm_distance: paths live on different grids");
  }
  return std::sqrt(sup_norm_squared(p1, p2));
}

CostMatrix::CostMatrix(std::size_t size, std::vector<double> values)
    : size_(size), values_(std::move(values)) {
  if (values_.size() != size_ * size_) throw std::invalid_argument("CostMatrix: need N*N values");
}

CostMatrix squared_sup_cost(std::span<const PathSample> mu, std::span<const PathSample> nu,
                            std::size_t workers) {
  if (mu.size() != nu.size()) throw std::invalid_argument("cost matrix: sample counts differ");
  const std::size_t n = mu.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(mu[i].grid() == mu[0].grid()) || !(nu[i].grid() == mu[0].grid()) ||
        mu[i].dim() != mu[0].dim() || nu[i].dim() != mu[0].dim()) {
      throw std::invalid_argument("cost matrix: paths live on different grids");
    }
  }
  CostMatrix cost(n);
  parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        cost(i, j) = sup_norm_squared(mu[i], nu[j]);
      }
    }
  });
  return cost;
}

// Shortest augmenting paths with row/column potentials (Kuhn-Munkres in the
// Jonker-Volgenant formulation): rows are inserted one at a time and each
// insertion runs a Dijkstra pass over reduced costs.
Assignment solve_assignment(const CostMatrix& cost) {
  const std::size_t n = cost.size();
  Assignment out;
  out.column_of_row.assign(n, 0);
  if (n == 0) return out;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  // 1-based columns with column 0 as the virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_reduced(n + 1);
  std::vector<std::size_t> row_of_col(n + 1, kNone), prev(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t row = 0; row < n; ++row) {
    row_of_col[0] = row;
    std::size_t col0 = 0;
    std::fill(min_reduced.begin(), min_reduced.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t r = row_of_col[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = cost(r, j - 1) - u[r + 1] - v[j];
        if (reduced < min_reduced[j]) {
          min_reduced[j] = reduced;
          prev[j] = col0;
        }
        if (min_reduced[j] < delta) {
          delta = min_reduced[j];
          col1 = j;
        }
      }
      if (col1 == 0) throw std::runtime_error("solve_assignment: non-finite cost matrix");
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j] + 1] += delta;
          v[j] -= delta;
        } else {
          min_reduced[j] -= delta;
        }
      }
      col0 = col1;
    } while (row_of_col[col0] != kNone);
    do {
      const std::size_t col1 = prev[col0];
      row_of_col[col0] = row_of_col[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  for (std::size_t j = 1; j <= n; ++j) out.column_of_row[row_of_col[j]] = j - 1;
  for (std::size_t i = 0; i < n; ++i) out.total_cost += cost(i, out.column_of_row[i]);
  return out;
}

double empirical_w2(std::span<const PathSample> mu, std::span<const PathSample> nu,
                    std::size_t cap, std::size_t workers) {
  if (mu.size() != nu.size()) throw std::invalid_argument("empirical_w2: sample counts differ");
  if (mu.empty()) throw std::invalid_argument("empirical_w2: empty measures");
  if (mu.size() > cap) {
    throw std::invalid_argument("empirical_w2: N = " + std::to_string(mu.size()) +
                                " exceeds the assignment cap " + std::to_string(cap) +
                                "; use batched_w2_estimate");
  }
  const auto cost = squared_sup_cost(mu, nu, workers);
  const auto assignment = solve_assignment(cost);
  return std::sqrt(std::max(0.0, assignment.total_cost / static_cast<double>(mu.size())));
}

McEstimate batched_w2_estimate(std::span<const PathSample> mu, std::span<const PathSample> nu,
                               std::size_t batch, std::size_t rounds, std::size_t workers) {
  if (batch == 0 || batch > kDefaultAssignmentCap) {
    throw std::invalid_argument("batched_w2_estimate: batch must be in [1, cap]");
  }
  if (rounds < 2) throw std::invalid_argument("batched_w2_estimate: need at least 2 rounds");
  if (mu.size() < batch * rounds || nu.size() < batch * rounds) {
    throw std::invalid_argument("batched_w2_estimate: insufficient samples for " +
                                std::to_string(rounds) + " rounds of " + std::to_string(batch));
  }
  std::vector<double> values(rounds);
  // Rounds are independent; spread them over workers when there are enough,
  // otherwise parallelise inside each cost matrix.
  const std::size_t outer = std::min(workers, rounds);
  const std::size_t inner = std::max<std::size_t>(1, workers / std::max<std::size_t>(1, outer));
  parallel_for(rounds, outer, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      values[r] = empirical_w2(mu.subspan(r * batch, batch), nu.subspan(r * batch, batch),
                               kDefaultAssignmentCap, inner);
    }
  });
  return estimate_mean(values);
}

}  // namespace t2c
