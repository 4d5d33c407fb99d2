// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "t2certify/fields.hpp"

namespace t2c {

// Ranks are 1-based: rank 1 is the smallest coordinate. Ties are broken by
// particle index (the lower index gets the lower rank), which keeps every
// rank-dependent drift a total function; ties are a null event for
// non-degenerate diffusions.
std::vector<std::size_t> stable_ranks(std::span<const double> state);

struct RankModelSpec {
  std::size_t particles = 0;
  std::vector<double> deltas;  // rank-based: drift delta_r for the particle of rank r
  double atlas_delta = 0.0;
  // Atlas: ranks are permuted by this 1-based permutation and the drift acts
  // on the particle holding rank permutation[0]; the identity pushes the minimum.
  std::vector<std::size_t> permutation;
  std::function<double(std::size_t particle, double t)> sigma;
  double sigma_lo = 1.0;
  double sigma_hi = 1.0;

  void validate() const;  // throws ConfigError
};

struct QuantileModelSpec {
  std::size_t particles = 0;
  double alpha = 0.5;
  std::function<double(double t, double x, double v)> drift;
  double drift_sup = 0.0;  // declared bound of |drift|
  std::function<double(double t, double x)> sigma;
  double sigma_lo = 1.0;
  double sigma_hi = 1.0;

  void validate() const;  // throws ConfigError
};

// out_i = delta_{rank(i)}
void rank_based_drift(const RankModelSpec& spec, double t, std::span<const double> state,
                      std::span<double> out);

// out_i = atlas_delta if particle i holds the designated rank, else 0.
void atlas_drift(const RankModelSpec& spec, double t, std::span<const double> state,
                 std::span<double> out);

// inf{ u : #{x_i <= u} / n >= alpha }, i.e. the k-th order statistic for the
// smallest k with k / n >= alpha (alpha = 0 gives the minimum).
double empirical_quantile(std::span<const double> state, double alpha);

// out_i = drift(t, x_i, empirical_quantile(state, alpha))
void quantile_drift(const QuantileModelSpec& spec, double t, std::span<const double> state,
                    std::span<double> out);

DriftField make_rank_drift(const RankModelSpec& spec);
DriftField make_atlas_drift(const RankModelSpec& spec);
DriftField make_quantile_drift(const QuantileModelSpec& spec);
DiffusionField make_particle_diffusion(const RankModelSpec& spec);
// Diagonal sigma(t, x_i); the declared bounds come from the spec.
DiffusionField make_particle_diffusion(const QuantileModelSpec& spec);

// Samples (X(t), g(t)) of a one-dimensional process at one time.
struct RegressionSlice {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> g;
};

struct ConditionalDriftOptions {
  double bandwidth = 0.1;
  double g_sup = 1.0;  // estimates are clipped to [-g_sup, g_sup]
  double x_min = -4.0;
  double x_max = 4.0;
  double x_step = 0.05;
  double min_weight = 5.0;  // kernel mass below this marks a node unsupported
};

// Nadaraya-Watson estimate of E[g(t) | X(t) = x] on a node grid per slice.
class ConditionalDrift {
 public:
  std::size_t slices() const noexcept { return times_.size(); }
  std::size_t nodes() const noexcept { return node_count_; }
  double node(std::size_t j) const noexcept {
    return options_.x_min + static_cast<double>(j) * options_.x_step;
  }
  double time(std::size_t s) const noexcept { return times_[s]; }
  double value(std::size_t s, std::size_t j) const noexcept {
    return values_[s * node_count_ + j];
  }
  bool supported(std::size_t s, std::size_t j) const noexcept {
    return supported_[s * node_count_ + j] != 0;
  }
  const ConditionalDriftOptions& options() const noexcept { return options_; }

  // Piecewise constant in time (the latest slice with time <= t), linear in
  // x, constant beyond the node range.
  double operator()(double t, double x) const;

  DriftField as_drift_field() const;

 private:
  friend ConditionalDrift conditional_drift_estimate(std::span<const RegressionSlice>,
                                                     const ConditionalDriftOptions&);
  ConditionalDriftOptions options_;
  std::size_t node_count_ = 0;
  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<unsigned char> supported_;
};

// Gaussian kernel regression per slice, truncated at five bandwidths.
// Unsupported nodes take the value of the nearest supported node of the same
// slice (0 if none). Throws std::invalid_argument on an empty slice.
ConditionalDrift conditional_drift_estimate(std::span<const RegressionSlice> slices,
                                            const ConditionalDriftOptions& options);

}  // namespace t2c
