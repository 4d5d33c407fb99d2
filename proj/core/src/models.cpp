// SPDX-License-Identifier: MIT
#include "t2certify/models.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "t2certify/error.hpp"
#include "t2certify/particles.hpp"

namespace t2c {
namespace {

// A scalar broadcasts to every coordinate; otherwise the length must match.
std::vector<double> vector_of(const Config& config, const std::string& key, std::size_t dim) {
  std::vector<double> v = config.get_list(key);
  if (v.size() == 1) v.assign(dim, v[0]);
  if (v.size() != dim) {
    throw ConfigError(key + ": expected 1 or " + std::to_string(dim) + " values, got " +
                      std::to_string(v.size()));
  }
  return v;
}

// sigma_i(t) = sigma (1 + amplitude sin(2 pi t + i)).
double oscillating_sigma(double sigma, double amplitude, std::size_t i, double t) {
  return sigma * (1.0 + amplitude * std::sin(2.0 * std::numbers::pi * t + static_cast<double>(i)));
}

}  // namespace

ModelSpec build_model(const Config& config) {
  const std::string name = config.get("model.name");
  const bool particle = name == "rank" || name == "atlas" || name == "quantile";
  const std::size_t dim = particle ? config.get_size("model.particles") : config.get_size("model.dim");
  if (dim == 0) throw ConfigError("model: dimension must be >= 1");

  const double sigma = config.get_double("model.sigma");
  const double amplitude = config.get_double("model.sigma_amplitude");
  if (!(sigma > 0.0)) throw ConfigError("model.sigma must be > 0");
  if (!(std::abs(amplitude) < 1.0)) throw ConfigError("model.sigma_amplitude must be in (-1, 1)");
  const double sigma_lo = sigma * (1.0 - std::abs(amplitude));
  const double sigma_hi = sigma * (1.0 + std::abs(amplitude));
  auto per_particle = [sigma, amplitude](std::size_t i, double t) {
    return oscillating_sigma(sigma, amplitude, i, t);
  };
  DiffusionField diffusion =
      amplitude == 0.0 ? DiffusionField::identity(dim, sigma)
                       : DiffusionField::diagonal_time(dim, per_particle, sigma_lo, sigma_hi);

  const double scale = config.get_double("model.drift_scale");
  std::optional<DriftField> drift;
  if (name == "driftless") {
    drift = DriftField::zero(dim);
  } else if (name == "sgn") {
    drift = DriftField::sign(dim, scale);
  } else if (name == "regime") {
    drift = DriftField::regime_switching(vector_of(config, "model.regime_inside", dim),
                                         vector_of(config, "model.regime_outside", dim),
                                         config.get_double("model.regime_threshold"));
  } else if (name == "rank" || name == "atlas") {
    RankModelSpec spec;
    spec.particles = dim;
    spec.sigma = per_particle;
    spec.sigma_lo = sigma_lo;
    spec.sigma_hi = sigma_hi;
    if (name == "rank") {
      spec.deltas = config.get_list("model.deltas");
      if (spec.deltas.empty()) {
        // Default: push the lowest particle up and the highest down.
        spec.deltas.assign(dim, 0.0);
        if (dim > 1) {
          spec.deltas.front() = scale;
          spec.deltas.back() = -scale;
        }
      }
      drift = make_rank_drift(spec);
    } else {
      spec.atlas_delta = config.get_double("model.atlas_delta");
      for (double p : config.get_list("model.atlas_permutation")) {
        if (!(p >= 1.0) || p != std::floor(p)) {
          throw ConfigError("model.atlas_permutation: entries must be positive integers");
        }
        spec.permutation.push_back(static_cast<std::size_t>(p));
      }
      drift = make_atlas_drift(spec);
    }
    diffusion = make_particle_diffusion(spec);
  } else if (name == "quantile") {
    QuantileModelSpec spec;
    spec.particles = dim;
    spec.alpha = config.get_double("model.quantile_alpha");
    const double kappa = config.get_double("model.quantile_kappa");
    // Mean reversion towards the empirical quantile: -kappa sgn(x - v).
    spec.drift = [kappa](double, double x, double v) {
      return x > v ? -kappa : (x < v ? kappa : 0.0);
    };
    spec.drift_sup = std::abs(kappa);
    spec.sigma = [sigma, amplitude](double t, double) {
      return oscillating_sigma(sigma, amplitude, 0, t);
    };
    spec.sigma_lo = sigma_lo;
    spec.sigma_hi = sigma_hi;
    drift = make_quantile_drift(spec);
    diffusion = make_particle_diffusion(spec);
  } else {
    throw ConfigError("model.name: unknown model '" + name +
                      "' (driftless, sgn, regime, rank, atlas, quantile)");
  }

  const double p = config.get_double("model.p");
  const double q = config.get_double("model.q");
  if (p > 0.0 || q > 0.0) drift->with_integrability({p, q});

  return {name, dim, vector_of(config, "model.x0", dim), std::move(*drift), std::move(diffusion)};
}

TiltProcess build_tilt(const Config& config, std::size_t dim, double horizon) {
  const std::string kind = config.get("tilt.kind");
  if (kind == "zero") return TiltProcess::zero(dim);
  std::vector<double> c = vector_of(config, "tilt.c", dim);
  if (kind == "constant") return TiltProcess::constant(std::move(c));
  if (kind == "time") return TiltProcess::linear_in_time(std::move(c), horizon);
  if (kind == "path") return TiltProcess::lagged_tanh(std::move(c));
  throw ConfigError("tilt.kind: unknown tilt '" + kind + "' (zero, constant, time, path)");
}

TimeGrid build_grid(const Config& config) {
  return TimeGrid(config.get_double("grid.T"), config.get_size("grid.n"));
}

}  // namespace t2c
