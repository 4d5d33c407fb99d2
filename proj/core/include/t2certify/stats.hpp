// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <span>

namespace t2c {

// Monte Carlo mean with its standard error.
struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t count = 0;
};

// Welford accumulator. A constant stream yields mean == value and variance
// exactly zero.
class RunningStats {
 public:
  void push(double x) noexcept {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  std::size_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept {  // unbiased
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  McEstimate estimate() const noexcept;

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

McEstimate estimate_mean(std::span<const double> values) noexcept;

double normal_cdf(double z) noexcept;
double normal_quantile(double p);
// Two-sided p-value of a standard normal statistic.
double two_sided_p(double z) noexcept;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Wilson score interval for a binomial proportion at the given confidence.
Interval wilson_interval(std::size_t hits, std::size_t trials, double confidence);

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_distance(std::span<const double> a, std::span<const double> b);

}  // namespace t2c
