// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "t2certify/config.hpp"
#include "t2certify/fields.hpp"
#include "t2certify/girsanov.hpp"
#include "t2certify/time_grid.hpp"

namespace t2c {

// Declarative SDE: the named model of a config resolved into fields.
struct ModelSpec {
  std::string name;
  std::size_t dim = 1;
  std::vector<double> x0;
  DriftField drift;
  DiffusionField diffusion;
};

// Known names: driftless, sgn, regime, rank, atlas, quantile.
ModelSpec build_model(const Config& config);

// tilt.kind in {zero, constant, time, path}; tilt.c scales every coordinate.
TiltProcess build_tilt(const Config& config, std::size_t dim, double horizon);

TimeGrid build_grid(const Config& config);

}  // namespace t2c
