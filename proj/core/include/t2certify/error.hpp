// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace t2c {

// Bad user input: unknown names, malformed values, violated ranges.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical stage (simulation, PDE solve, inversion) could not complete.
// `stage` names the pipeline step so the CLI can report where it broke.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

// Euler-Maruyama produced a non-finite state.
class SimulationFailure : public NumericalError {
 public:
  SimulationFailure(std::size_t step, const std::string& what)
      : NumericalError("simulate", "step " + std::to_string(step) + ": " + what),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace t2c
