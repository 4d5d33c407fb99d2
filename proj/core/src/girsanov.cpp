// SPDX-License-Identifier: MIT
#include "t2certify/girsanov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "t2certify/error.hpp"
#include "t2certify/linalg.hpp"

namespace t2c {

std::string to_string(TiltKind kind) {
  switch (kind) {
    case TiltKind::constant:
      return "constant";
    case TiltKind::time_dependent:
      return "time";
    case TiltKind::path_dependent:
      return "path";
  }
  return "constant";
}

TiltProcess::TiltProcess(std::size_t dim, TiltKind kind, Rule rule, double sup_bound)
    : dim_(dim), kind_(kind), rule_(std::move(rule)), sup_bound_(sup_bound) {
  if (dim_ == 0) throw ConfigError("TiltProcess: dimension must be >= 1");
  if (!rule_) throw ConfigError("TiltProcess: empty rule");
  if (!(sup_bound_ >= 0.0)) throw ConfigError("TiltProcess: negative sup bound");
}

TiltProcess TiltProcess::zero(std::size_t dim) {
  return constant(std::vector<double>(dim, 0.0));
}

TiltProcess TiltProcess::constant(std::vector<double> c) {
  const std::size_t dim = c.size();
  const double bound = linalg::norm(c);
  return TiltProcess(
      dim, TiltKind::constant,
      [c = std::move(c)](double, const PathPrefix&, std::span<double> q) {
        std::copy(c.begin(), c.end(), q.begin());
      },
      bound);
}

TiltProcess TiltProcess::linear_in_time(std::vector<double> c, double horizon) {
  const std::size_t dim = c.size();
  const double bound = linalg::norm(c) * horizon;
  return TiltProcess(
      dim, TiltKind::time_dependent,
      [c = std::move(c)](double t, const PathPrefix&, std::span<double> q) {
        for (std::size_t i = 0; i < c.size(); ++i) q[i] = c[i] * t;
      },
      bound);
}

TiltProcess TiltProcess::lagged_tanh(std::vector<double> c) {
  const std::size_t dim = c.size();
  const double bound = linalg::norm(c);
  return TiltProcess(
      dim, TiltKind::path_dependent,
      [c = std::move(c)](double, const PathPrefix& path, std::span<double> q) {
        const std::size_t k = path.step();
        const auto now = path.at(k);
        const auto then = path.at(k / 2);
        for (std::size_t i = 0; i < c.size(); ++i) q[i] = c[i] * std::tanh(now[i] - then[i]);
      },
      bound);
}

CoupledPaths girsanov_coupling(const DriftField& drift, const DiffusionField& diffusion,
                               const TiltProcess& tilt, std::span<const double> x0,
                               const TimeGrid& grid, const NoiseSource& noise) {
  const auto dw = brownian_increments(noise, grid, x0.size());
  return girsanov_coupling(drift, diffusion, tilt, x0, grid, dw);
}

CoupledPaths girsanov_coupling(const DriftField& drift, const DiffusionField& diffusion,
                               const TiltProcess& tilt, std::span<const double> x0,
                               const TimeGrid& grid, std::span<const double> increments) {
  const std::size_t d = x0.size();
  if (d == 0 || drift.dim() != d || diffusion.dim() != d || tilt.dim() != d) {
    throw ConfigError("girsanov_coupling: dimension mismatch");
  }
  if (increments.size() != grid.steps() * d) {
    throw std::invalid_argument("girsanov_coupling: expected n * d increments");
  }
  CoupledPaths pair{PathSample(grid, d), PathSample(grid, d),
                    std::vector<double>(grid.steps() * d)};
  std::copy(x0.begin(), x0.end(), pair.x_path.at(0).begin());
  std::copy(x0.begin(), x0.end(), pair.y_path.at(0).begin());

  const double dt = grid.dt();
  std::vector<double> b(d), sigma(d * d), shift(d), noise_term(d);
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double t = grid.time(k);
    const auto dwk = increments.subspan(k * d, d);
    auto q = std::span<double>(pair.q_trace).subspan(k * d, d);

    const auto xk = pair.x_path.at(k);
    tilt(t, PathPrefix(pair.x_path.prefix(k), d), q);
    drift(t, xk, b);
    diffusion(t, xk, sigma);
    linalg::matvec(sigma, q, shift);
    linalg::matvec(sigma, dwk, noise_term);
    auto xn = pair.x_path.at(k + 1);
    for (std::size_t i = 0; i < d; ++i) {
      xn[i] = xk[i] + (b[i] + shift[i]) * dt + noise_term[i];
      if (!std::isfinite(xn[i])) throw SimulationFailure(k, "non-finite tilted state");
    }

    const auto yk = pair.y_path.at(k);
    drift(t, yk, b);
    diffusion(t, yk, sigma);
    linalg::matvec(sigma, dwk, noise_term);
    auto yn = pair.y_path.at(k + 1);
    for (std::size_t i = 0; i < d; ++i) {
      yn[i] = yk[i] + b[i] * dt + noise_term[i];
      if (!std::isfinite(yn[i])) throw SimulationFailure(k, "non-finite reference state");
    }
  }
  return pair;
}

double tilt_energy(const CoupledPaths& pair) {
  const double dt = pair.x_path.grid().dt();
  double s = 0.0;
  for (double v : pair.q_trace) s += v * v;
  return 0.5 * s * dt;
}

double sup_gap_squared(const CoupledPaths& pair) {
  const std::size_t d = pair.x_path.dim();
  double best = 0.0;
  for (std::size_t k = 0; k < pair.x_path.grid().nodes(); ++k) {
    const auto x = pair.x_path.at(k);
    const auto y = pair.y_path.at(k);
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    best = std::max(best, s);
  }
  return best;
}

namespace {

void check_batch(std::span<const CoupledPaths> batch) {
  if (batch.empty()) throw std::invalid_argument("empty coupling batch");
  const TimeGrid& grid = batch.front().x_path.grid();
  for (const auto& p : batch) {
    if (!(p.x_path.grid() == grid) || !(p.y_path.grid() == grid)) {
      throw std::invalid_argument("coupling batch mixes time grids");
    }
  }
}

}  // namespace

McEstimate entropy_of_tilt(const TiltProcess& tilt, std::span<const CoupledPaths> batch) {
  check_batch(batch);
  RunningStats s;
  for (const auto& p : batch) {
    if (p.x_path.dim() != tilt.dim()) throw std::invalid_argument("tilt dimension mismatch");
    s.push(tilt_energy(p));
  }
  return s.estimate();
}

McEstimate coupling_sup_distance(std::span<const CoupledPaths> batch) {
  check_batch(batch);
  RunningStats s;
  for (const auto& p : batch) s.push(sup_gap_squared(p));
  return s.estimate();
}

}  // namespace t2c
