// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>

namespace t2c {

// Inputs of the explicit T2 constant
//   C(eps) = 2 exp(6 (C_BDG^2 + eps) / (eps (1 - eps)) T) / (1 - eps) ||sigma||^2.
// C_BDG has no agreed sharp value; 2.0 is the default and every report
// prints the value used.
struct ConstantInputs {
  double horizon = 1.0;
  double sigma_sup = 1.0;
  double c_bdg = 2.0;
  double eps_min = 1e-3;  // search window [eps_min, 1 - eps_min]

  void validate() const;  // throws ConfigError
};

// Throws std::domain_error for eps outside (0, 1).
double t2_constant_at(double eps, const ConstantInputs& inputs);

// log C(eps); finite where t2_constant_at would overflow.
double log_t2_constant_at(double eps, const ConstantInputs& inputs);

struct EpsilonOptimum {
  double epsilon = 0.5;
  double constant = 0.0;
  bool at_boundary = false;  // minimiser sits at an end of the window
};

// Coarse grid of at least 200 points, then golden-section refinement of the
// best bracket to relative tolerance 1e-8 in eps.
EpsilonOptimum optimize_epsilon(const ConstantInputs& inputs);

// T2 constant of the image of a T2(C) law under a lip-Lipschitz map: C lip^2.
double lipschitz_transfer(double constant, double lip);

struct TheoremConstant {
  EpsilonOptimum base;   // optimised with sigma_sup replaced by sup |sigma~|
  double psi_lip = 1.0;  // Lipschitz constant of the inverse transform
  double constant = 0.0;
};

// End-to-end constant for a drifted model: the T2 constant of the driftless
// transformed diffusion, pushed back through the inverse transform.
TheoremConstant theorem_constant(const ConstantInputs& inputs, double psi_lip,
                                 double sigma_tilde_sup);

}  // namespace t2c
