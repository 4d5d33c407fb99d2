// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "t2certify/fields.hpp"
#include "t2certify/noise.hpp"
#include "t2certify/time_grid.hpp"

namespace t2c {

// A d-dimensional path sampled on every node of a TimeGrid. Values are stored
// node-major: at(k)[i] is coordinate i at t_k.
class PathSample {
 public:
  PathSample(TimeGrid grid, std::size_t dim);
  PathSample(TimeGrid grid, std::size_t dim, std::vector<double> values);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> at(std::size_t k) const noexcept {
    return {values_.data() + k * dim_, dim_};
  }
  std::span<double> at(std::size_t k) noexcept { return {values_.data() + k * dim_, dim_}; }

  // Nodes 0..k inclusive.
  std::span<const double> prefix(std::size_t k) const noexcept {
    return {values_.data(), (k + 1) * dim_};
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

 private:
  TimeGrid grid_;
  std::size_t dim_;
  std::vector<double> values_;
};

// Left-point Euler-Maruyama:
//   X_{k+1} = X_k + b(t_k, X_k) dt + sigma(t_k, X_k) dW_k.
// Throws SimulationFailure if a non-finite value appears.
PathSample euler_maruyama(const DriftField& drift, const DiffusionField& diffusion,
                          std::span<const double> x0, const TimeGrid& grid,
                          const NoiseSource& noise);

// Same recursion driven by caller-supplied increments (n * d values).
PathSample euler_maruyama(const DriftField& drift, const DiffusionField& diffusion,
                          std::span<const double> x0, const TimeGrid& grid,
                          std::span<const double> increments);

// 1-Lipschitz path functionals with respect to the grid sup-norm.
enum class FunctionalKind { sup_norm, terminal_coordinate, time_average_coordinate };

struct PathFunctional {
  FunctionalKind kind = FunctionalKind::sup_norm;
  std::size_t coordinate = 0;

  // Accepts "sup", "terminal:<i>", "average:<i>". Throws ConfigError.
  static PathFunctional parse(std::string_view tag);
  std::string tag() const;
};

double lipschitz_functional_eval(const PathFunctional& f, const PathSample& path);

}  // namespace t2c
