// SPDX-License-Identifier: MIT
#include "t2certify/particles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "t2certify/error.hpp"

namespace t2c {

std::vector<std::size_t> stable_ranks(std::span<const double> state) {
  std::vector<std::size_t> order(state.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return state[a] < state[b]; });
  std::vector<std::size_t> rank(state.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;
  return rank;
}

void RankModelSpec::validate() const {
  if (particles == 0) throw ConfigError("particle model: need at least one particle");
  if (!deltas.empty() && deltas.size() != particles) {
    throw ConfigError("rank model: expected " + std::to_string(particles) + " deltas, got " +
                      std::to_string(deltas.size()));
  }
  if (!permutation.empty()) {
    if (permutation.size() != particles) {
      throw ConfigError("atlas model: permutation must have one entry per particle");
    }
    std::vector<std::size_t> sorted = permutation;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] != i + 1) throw ConfigError("atlas model: not a permutation of 1..N");
    }
  }
  if (!sigma) throw ConfigError("particle model: sigma is not set");
  if (!(sigma_lo > 0.0) || !(sigma_hi >= sigma_lo)) {
    throw ConfigError("particle model: need 0 < sigma_lo <= sigma_hi");
  }
}

void QuantileModelSpec::validate() const {
  if (particles == 0) throw ConfigError("quantile model: need at least one particle");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("quantile model: alpha must be in [0, 1]");
  if (!drift || !sigma) throw ConfigError("quantile model: drift and sigma must be set");
  if (!(drift_sup >= 0.0)) throw ConfigError("quantile model: drift bound must be >= 0");
  if (!(sigma_lo > 0.0) || !(sigma_hi >= sigma_lo)) {
    throw ConfigError("quantile model: need 0 < sigma_lo <= sigma_hi");
  }
}

void rank_based_drift(const RankModelSpec& spec, double, std::span<const double> state,
                      std::span<double> out) {
  const auto rank = stable_ranks(state);
  for (std::size_t i = 0; i < state.size(); ++i) out[i] = spec.deltas[rank[i] - 1];
}

void atlas_drift(const RankModelSpec& spec, double, std::span<const double> state,
                 std::span<double> out) {
  const std::size_t target = spec.permutation.empty() ? 1 : spec.permutation[0];
  const auto rank = stable_ranks(state);
  for (std::size_t i = 0; i < state.size(); ++i) {
    out[i] = rank[i] == target ? spec.atlas_delta : 0.0;
  }
}

double empirical_quantile(std::span<const double> state, double alpha) {
  if (state.empty()) throw std::invalid_argument("empirical_quantile: empty state");
  const std::size_t n = state.size();
  const double nd = static_cast<double>(n);
  // Integer search avoids ceil(alpha * n) landing one off after rounding.
  std::size_t k = static_cast<std::size_t>(std::clamp(std::ceil(alpha * nd), 1.0, nd));
  while (k > 1 && static_cast<double>(k - 1) / nd >= alpha) --k;
  while (k < n && static_cast<double>(k) / nd < alpha) ++k;
  std::vector<double> copy(state.begin(), state.end());
  std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(k - 1), copy.end());
  return copy[k - 1];
}

void quantile_drift(const QuantileModelSpec& spec, double t, std::span<const double> state,
                    std::span<double> out) {
  const double v = empirical_quantile(state, spec.alpha);
  for (std::size_t i = 0; i < state.size(); ++i) out[i] = spec.drift(t, state[i], v);
}

DriftField make_rank_drift(const RankModelSpec& spec) {
  spec.validate();
  if (spec.deltas.size() != spec.particles) throw ConfigError("rank model: deltas are not set");
  double sq = 0.0;
  for (double d : spec.deltas) sq += d * d;
  return DriftField(
      spec.particles,
      [spec](double t, std::span<const double> x, std::span<double> out) {
        rank_based_drift(spec, t, x, out);
      },
      std::sqrt(sq), "rank");
}

DriftField make_atlas_drift(const RankModelSpec& spec) {
  spec.validate();
  return DriftField(
      spec.particles,
      [spec](double t, std::span<const double> x, std::span<double> out) {
        atlas_drift(spec, t, x, out);
      },
      std::abs(spec.atlas_delta), "atlas");
}

DriftField make_quantile_drift(const QuantileModelSpec& spec) {
  spec.validate();
  return DriftField(
      spec.particles,
      [spec](double t, std::span<const double> x, std::span<double> out) {
        quantile_drift(spec, t, x, out);
      },
      spec.drift_sup * std::sqrt(static_cast<double>(spec.particles)), "quantile");
}

DiffusionField make_particle_diffusion(const RankModelSpec& spec) {
  spec.validate();
  const std::size_t n = spec.particles;
  return DiffusionField(
      n,
      [sigma = spec.sigma, n](double t, std::span<const double>, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) out[i * n + i] = sigma(i, t);
      },
      spec.sigma_hi, spec.sigma_lo, "diagonal");
}

DiffusionField make_particle_diffusion(const QuantileModelSpec& spec) {
  spec.validate();
  const std::size_t n = spec.particles;
  return DiffusionField(
      n,
      [sigma = spec.sigma, n](double t, std::span<const double> x, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) out[i * n + i] = sigma(t, x[i]);
      },
      spec.sigma_hi, spec.sigma_lo, "diagonal");
}

double ConditionalDrift::operator()(double t, double x) const {
  if (times_.empty()) return 0.0;
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t s = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  const double last = node(node_count_ - 1);
  if (x <= options_.x_min) return value(s, 0);
  if (x >= last) return value(s, node_count_ - 1);
  const double pos = (x - options_.x_min) / options_.x_step;
  const std::size_t j = std::min(static_cast<std::size_t>(pos), node_count_ - 2);
  const double w = pos - static_cast<double>(j);
  return (1.0 - w) * value(s, j) + w * value(s, j + 1);
}

DriftField ConditionalDrift::as_drift_field() const {
  return DriftField(
      1,
      [self = *this](double t, std::span<const double> x, std::span<double> out) {
        out[0] = self(t, x[0]);
      },
      options_.g_sup, "conditional");
}

ConditionalDrift conditional_drift_estimate(std::span<const RegressionSlice> slices,
                                            const ConditionalDriftOptions& options) {
  if (!(options.bandwidth > 0.0) || !(options.x_step > 0.0) || !(options.x_max > options.x_min)) {
    throw std::invalid_argument("conditional drift: bad bandwidth or node range");
  }
  if (slices.empty()) throw std::invalid_argument("conditional drift: no slices");
  ConditionalDrift est;
  est.options_ = options;
  est.node_count_ =
      static_cast<std::size_t>(std::floor((options.x_max - options.x_min) / options.x_step + 1e-9)) + 1;
  if (est.node_count_ < 2) throw std::invalid_argument("conditional drift: need two nodes");
  const std::size_t m = est.node_count_;
  est.values_.assign(slices.size() * m, 0.0);
  est.supported_.assign(slices.size() * m, 0);

  std::vector<std::size_t> order;
  std::vector<double> xs, gs;
  for (std::size_t s = 0; s < slices.size(); ++s) {
    const RegressionSlice& slice = slices[s];
    if (slice.x.empty() || slice.x.size() != slice.g.size()) {
      throw std::invalid_argument("conditional drift: slice " + std::to_string(s) +
                                  " is empty or has mismatched sizes");
    }
    if (s > 0 && slice.t < slices[s - 1].t) {
      throw std::invalid_argument("conditional drift: slices must be sorted by time");
    }
    est.times_.push_back(slice.t);
    order.resize(slice.x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return slice.x[a] < slice.x[b]; });
    xs.resize(order.size());
    gs.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      xs[i] = slice.x[order[i]];
      gs[i] = slice.g[order[i]];
    }
    const double reach = 5.0 * options.bandwidth;
    for (std::size_t j = 0; j < m; ++j) {
      const double c = est.node(j);
      const auto lo = std::lower_bound(xs.begin(), xs.end(), c - reach);
      const auto hi = std::upper_bound(lo, xs.end(), c + reach);
      double w_sum = 0.0, wg_sum = 0.0;
      for (auto it = lo; it != hi; ++it) {
        const double z = (*it - c) / options.bandwidth;
        const double w = std::exp(-0.5 * z * z);
        w_sum += w;
        wg_sum += w * gs[static_cast<std::size_t>(it - xs.begin())];
      }
      if (w_sum >= options.min_weight && w_sum > 0.0) {
        est.values_[s * m + j] = std::clamp(wg_sum / w_sum, -options.g_sup, options.g_sup);
        est.supported_[s * m + j] = 1;
      }
    }
    // Nearest supported node fills the gaps.
    std::vector<double> filled(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      if (est.supported_[s * m + j]) {
        filled[j] = est.values_[s * m + j];
        continue;
      }
      std::size_t best = m;
      std::size_t best_dist = m;
      for (std::size_t k = 0; k < m; ++k) {
        if (!est.supported_[s * m + k]) continue;
        const std::size_t dist = k > j ? k - j : j - k;
        if (dist < best_dist) {
          best_dist = dist;
          best = k;
        }
      }
      filled[j] = best < m ? est.values_[s * m + best] : 0.0;
    }
    std::copy(filled.begin(), filled.end(), est.values_.begin() + static_cast<std::ptrdiff_t>(s * m));
  }
  return est;
}

}  // namespace t2c
