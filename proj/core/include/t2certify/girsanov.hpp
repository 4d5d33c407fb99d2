// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "t2certify/fields.hpp"
#include "t2certify/noise.hpp"
#include "t2certify/sde.hpp"
#include "t2certify/stats.hpp"

namespace t2c {

enum class TiltKind { constant, time_dependent, path_dependent };

std::string to_string(TiltKind kind);

// Read-only view of X on nodes 0..step. A tilt only ever receives this view,
// which is how progressive measurability is enforced on the grid.
class PathPrefix {
 public:
  PathPrefix(std::span<const double> values, std::size_t dim) noexcept
      : values_(values), dim_(dim) {}

  std::size_t step() const noexcept { return values_.size() / dim_ - 1; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> at(std::size_t j) const noexcept {
    return values_.subspan(j * dim_, dim_);
  }

 private:
  std::span<const double> values_;
  std::size_t dim_;
};

// Drift perturbation q(t_k, X|[0,t_k]) defining the tilted law nu.
class TiltProcess {
 public:
  using Rule = std::function<void(double t, const PathPrefix& path, std::span<double> q)>;

  TiltProcess(std::size_t dim, TiltKind kind, Rule rule, double sup_bound);

  static TiltProcess zero(std::size_t dim);
  static TiltProcess constant(std::vector<double> c);
  // q(t) = c * t
  static TiltProcess linear_in_time(std::vector<double> c, double horizon);
  // q_i = c_i * tanh(X_i(t_k) - X_i(t_{floor(k/2)})): bounded, non-Markov.
  static TiltProcess lagged_tanh(std::vector<double> c);

  void operator()(double t, const PathPrefix& path, std::span<double> q) const {
    rule_(t, path, q);
  }

  std::size_t dim() const noexcept { return dim_; }
  TiltKind kind() const noexcept { return kind_; }
  double sup_bound() const noexcept { return sup_bound_; }

 private:
  std::size_t dim_;
  TiltKind kind_;
  Rule rule_;
  double sup_bound_;
};

// Synchronously coupled pair: X follows the tilted dynamics, Y the reference
// dynamics, both driven by the same increments.
struct CoupledPaths {
  PathSample x_path;
  PathSample y_path;
  std::vector<double> q_trace;  // n * d, q_trace[k] = q(t_k, X|[0,t_k])
};

//   X_{k+1} = X_k + (b(t_k,X_k) + sigma(t_k,X_k) q_k) dt + sigma(t_k,X_k) dW_k
//   Y_{k+1} = Y_k +  b(t_k,Y_k) dt                      + sigma(t_k,Y_k) dW_k
CoupledPaths girsanov_coupling(const DriftField& drift, const DiffusionField& diffusion,
                               const TiltProcess& tilt, std::span<const double> x0,
                               const TimeGrid& grid, const NoiseSource& noise);

CoupledPaths girsanov_coupling(const DriftField& drift, const DiffusionField& diffusion,
                               const TiltProcess& tilt, std::span<const double> x0,
                               const TimeGrid& grid, std::span<const double> increments);

// 1/2 sum_k |q_k|^2 dt for one pair (the entropy integrand).
double tilt_energy(const CoupledPaths& pair);

// max_k |X_k - Y_k|^2 for one pair.
double sup_gap_squared(const CoupledPaths& pair);

// H(nu | mu_x) estimated as the batch mean of tilt_energy. Throws
// std::invalid_argument on an empty batch or mismatched grids.
McEstimate entropy_of_tilt(const TiltProcess& tilt, std::span<const CoupledPaths> batch);

// E_Q[sup_t |X - Y|^2], an upper bound for W_2^2(nu, mu_x).
McEstimate coupling_sup_distance(std::span<const CoupledPaths> batch);

}  // namespace t2c
