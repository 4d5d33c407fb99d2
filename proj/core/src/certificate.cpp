// SPDX-License-Identifier: MIT
#include "t2certify/certificate.hpp"

#include <cmath>
#include <limits>

namespace t2c {

double combined_stderr(const T2Certificate& cert) {
  const double w2_term = 2.0 * cert.w2_emp.mean * cert.w2_emp.stderr_;
  const double h_term = cert.constant * cert.entropy.stderr_;
  return std::sqrt(w2_term * w2_term + h_term * h_term);
}

void decide(T2Certificate& cert) {
  const double w2_sq = cert.w2_emp.mean * cert.w2_emp.mean;
  const double rhs = cert.constant * cert.entropy.mean;
  cert.slack_ratio = w2_sq > 0.0 ? rhs / w2_sq : std::numeric_limits<double>::infinity();
  cert.pass = w2_sq <= rhs + 3.0 * combined_stderr(cert);
}

}  // namespace t2c
