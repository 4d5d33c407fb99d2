// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>

#include "t2certify/error.hpp"

namespace t2c {

// Uniform grid t_k = k * T / n on [0, T].
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
    if (steps == 0) throw ConfigError("TimeGrid: steps must be >= 1");
    if (!(horizon > 0.0)) throw ConfigError("TimeGrid: horizon must be > 0");
  }

  double horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return steps_; }
  std::size_t nodes() const noexcept { return steps_ + 1; }
  double dt() const noexcept { return horizon_ / static_cast<double>(steps_); }

  // The last node is pinned to T so that t_n == T holds bit-exactly.
  double time(std::size_t k) const noexcept {
    return k == steps_ ? horizon_ : static_cast<double>(k) * dt();
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double horizon_;
  std::size_t steps_;
};

}  // namespace t2c
