// SPDX-License-Identifier: MIT
#include "t2certify/sde.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "t2certify/error.hpp"
#include "t2certify/linalg.hpp"

namespace t2c {

PathSample::PathSample(TimeGrid grid, std::size_t dim)
    : grid_(grid), dim_(dim), values_(grid.nodes() * dim, 0.0) {
  if (dim == 0) throw ConfigError("PathSample: dimension must be >= 1");
}

PathSample::PathSample(TimeGrid grid, std::size_t dim, std::vector<double> values)
    : grid_(grid), dim_(dim), values_(std::move(values)) {
  if (dim == 0) throw ConfigError("PathSample: dimension must be >= 1");
  if (values_.size() != grid_.nodes() * dim_) {
    throw std::invalid_argument("PathSample: expected (n + 1) * d values");
  }
}

PathSample euler_maruyama(const DriftField& drift, const DiffusionField& diffusion,
                          std::span<const double> x0, const TimeGrid& grid,
                          const NoiseSource& noise) {
  const auto dw = brownian_increments(noise, grid, x0.size());
  return euler_maruyama(drift, diffusion, x0, grid, dw);
}

PathSample euler_maruyama(const DriftField& drift, const DiffusionField& diffusion,
                          std::span<const double> x0, const TimeGrid& grid,
                          std::span<const double> increments) {
  const std::size_t d = x0.size();
  if (d == 0 || drift.dim() != d || diffusion.dim() != d) {
    throw ConfigError("euler_maruyama: dimension mismatch between x0 and fields");
  }
  if (increments.size() != grid.steps() * d) {
    throw std::invalid_argument("euler_maruyama: expected n * d increments");
  }
  PathSample path(grid, d);
  std::copy(x0.begin(), x0.end(), path.at(0).begin());

  const double dt = grid.dt();
  std::vector<double> b(d), sigma(d * d), noise_term(d);
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double t = grid.time(k);
    const auto xk = path.at(k);
    drift(t, xk, b);
    diffusion(t, xk, sigma);
    linalg::matvec(sigma, increments.subspan(k * d, d), noise_term);
    auto next = path.at(k + 1);
    for (std::size_t i = 0; i < d; ++i) {
      next[i] = xk[i] + b[i] * dt + noise_term[i];
      if (!std::isfinite(next[i])) {
        throw SimulationFailure(k, "non-finite state (unbounded drift or diffusion?)");
      }
    }
  }
  return path;
}

PathFunctional PathFunctional::parse(std::string_view tag) {
  if (tag == "sup" || tag == "sup-norm") return {FunctionalKind::sup_norm, 0};
  const auto colon = tag.find(':');
  if (colon != std::string_view::npos) {
    const auto head = tag.substr(0, colon);
    const auto tail = tag.substr(colon + 1);
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), index);
    if (ec == std::errc() && ptr == tail.data() + tail.size()) {
      if (head == "terminal") return {FunctionalKind::terminal_coordinate, index};
      if (head == "average") return {FunctionalKind::time_average_coordinate, index};
    }
  }
  throw ConfigError("unknown path functional '" + std::string(tag) +
                    "' (expected sup, terminal:<i> or average:<i>)");
}

std::string PathFunctional::tag() const {
  switch (kind) {
    case FunctionalKind::sup_norm:
      return "sup";
    case FunctionalKind::terminal_coordinate:
      return "terminal:" + std::to_string(coordinate);
    case FunctionalKind::time_average_coordinate:
      return "average:" + std::to_string(coordinate);
  }
  return "sup";
}

double lipschitz_functional_eval(const PathFunctional& f, const PathSample& path) {
  if (f.kind != FunctionalKind::sup_norm && f.coordinate >= path.dim()) {
    throw ConfigError("path functional coordinate out of range");
  }
  const std::size_t n = path.grid().steps();
  switch (f.kind) {
    case FunctionalKind::sup_norm: {
      double best = 0.0;
      for (std::size_t k = 0; k <= n; ++k) best = std::max(best, linalg::norm(path.at(k)));
      return best;
    }
    case FunctionalKind::terminal_coordinate:
      return path.at(n)[f.coordinate];
    case FunctionalKind::time_average_coordinate: {
      // Trapezoidal weights sum to one, so the average is 1-Lipschitz.
      double s = 0.5 * (path.at(0)[f.coordinate] + path.at(n)[f.coordinate]);
      for (std::size_t k = 1; k < n; ++k) s += path.at(k)[f.coordinate];
      return s / static_cast<double>(n);
    }
  }
  throw ConfigError("unknown path functional");
}

}  // namespace t2c
