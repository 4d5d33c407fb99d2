// SPDX-License-Identifier: MIT
#include "t2certify/constants.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "t2certify/error.hpp"

namespace t2c {
namespace {

constexpr std::size_t kCoarsePoints = 256;
constexpr double kRelativeTolerance = 1e-8;

}  // namespace

void ConstantInputs::validate() const {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw ConfigError("T must be >= 0");
  if (!(sigma_sup > 0.0)) throw ConfigError("sigma_sup must be > 0");
  if (!(c_bdg > 0.0)) throw ConfigError("C_bdg must be > 0");
  if (!(eps_min > 0.0 && eps_min < 0.5)) throw ConfigError("eps_min must lie in (0, 1/2)");
}

double log_t2_constant_at(double eps, const ConstantInputs& in) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error("t2_constant_at: eps must lie in (0, 1), got " + std::to_string(eps));
  }
  const double rate = 6.0 * (in.c_bdg * in.c_bdg + eps) / (eps * (1.0 - eps)) * in.horizon;
  return std::log(2.0) + rate - std::log1p(-eps) + 2.0 * std::log(in.sigma_sup);
}

double t2_constant_at(double eps, const ConstantInputs& in) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error("t2_constant_at: eps must lie in (0, 1), got " + std::to_string(eps));
  }
  const double rate = 6.0 * (in.c_bdg * in.c_bdg + eps) / (eps * (1.0 - eps)) * in.horizon;
  return 2.0 * std::exp(rate) * (1.0 / (1.0 - eps)) * in.sigma_sup * in.sigma_sup;
}

EpsilonOptimum optimize_epsilon(const ConstantInputs& in) {
  in.validate();
  const double lo = in.eps_min;
  const double hi = 1.0 - in.eps_min;
  const double spacing = (hi - lo) / static_cast<double>(kCoarsePoints - 1);
  auto grid_point = [&](std::size_t i) {
    return i + 1 == kCoarsePoints ? hi : lo + static_cast<double>(i) * spacing;
  };

  // The search runs on log C so that large horizons do not overflow.
  std::size_t best = 0;
  double best_log = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kCoarsePoints; ++i) {
    const double v = log_t2_constant_at(grid_point(i), in);
    if (v < best_log) {
      best_log = v;
      best = i;
    }
  }

  double a = grid_point(best == 0 ? 0 : best - 1);
  double b = grid_point(best + 1 == kCoarsePoints ? best : best + 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = log_t2_constant_at(c, in);
  double fd = log_t2_constant_at(d, in);
  while (b - a > kRelativeTolerance * std::abs(0.5 * (a + b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = log_t2_constant_at(c, in);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = log_t2_constant_at(d, in);
    }
  }

  // Keep the best of the refined candidates and the grid point itself, so the
  // result is never worse than the coarse grid.
  EpsilonOptimum out;
  out.epsilon = grid_point(best);
  double out_log = best_log;
  for (double cand : {a, b, 0.5 * (a + b), c, d}) {
    const double v = log_t2_constant_at(cand, in);
    if (v < out_log) {
      out_log = v;
      out.epsilon = cand;
    }
  }
  out.constant = t2_constant_at(out.epsilon, in);
  out.at_boundary = out.epsilon - lo <= spacing || hi - out.epsilon <= spacing;
  return out;
}

double lipschitz_transfer(double constant, double lip) {
  if (!(constant > 0.0)) throw std::invalid_argument("lipschitz_transfer: C must be > 0");
  if (!(lip > 0.0)) throw std::invalid_argument("lipschitz_transfer: lip must be > 0");
  return constant * (lip * lip);
}

TheoremConstant theorem_constant(const ConstantInputs& inputs, double psi_lip,
                                 double sigma_tilde_sup) {
  ConstantInputs transformed = inputs;
  transformed.sigma_sup = sigma_tilde_sup;
  TheoremConstant out;
  out.base = optimize_epsilon(transformed);
  out.psi_lip = psi_lip;
  out.constant = lipschitz_transfer(out.base.constant, psi_lip);
  return out;
}

}  // namespace t2c
