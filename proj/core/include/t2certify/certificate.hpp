// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <string>

#include "t2certify/stats.hpp"

namespace t2c {

// One verification run of W_2(mu, nu)^2 <= C H(nu | mu).
struct T2Certificate {
  std::string experiment_id;
  std::string model;
  double horizon = 0.0;
  std::size_t steps = 0;
  std::size_t samples = 0;

  double constant = 0.0;
  double epsilon_star = 0.5;
  double c_bdg = 0.0;

  McEstimate entropy;   // H(nu | mu_x)
  McEstimate w2_upper;  // sqrt(E sup |X - Y|^2)
  McEstimate w2_emp;    // batched empirical W_2

  double slack_ratio = 0.0;  // C H / W_2^2, +inf when W_2 == 0
  bool pass = false;
};

// Combined standard error of (w2_emp^2 - C H) by the delta method.
double combined_stderr(const T2Certificate& cert);

// Fills slack_ratio and pass:
//   pass iff w2_emp^2 <= C H + 3 * combined_stderr.
void decide(T2Certificate& cert);

}  // namespace t2c
