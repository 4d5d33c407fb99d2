// SPDX-License-Identifier: MIT
#include "t2certify/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "t2certify/error.hpp"
#include "t2certify/linalg.hpp"

namespace t2c {
namespace {

inline double sgn(double v) noexcept { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

bool Integrability::admissible(std::size_t dim) const noexcept {
  const double d = static_cast<double>(dim);
  return p >= 2.0 * (d + 1.0) && q > 2.0 && d / p + 2.0 / q < 1.0;
}

DriftField::DriftField(std::size_t dim, Rule rule, std::optional<double> sup_bound,
                       std::string name)
    : dim_(dim), rule_(std::move(rule)), sup_bound_(sup_bound), name_(std::move(name)) {
  if (dim_ == 0) throw ConfigError("DriftField: dimension must be >= 1");
  if (!rule_) throw ConfigError("DriftField: empty rule");
  if (sup_bound_ && !(*sup_bound_ >= 0.0)) throw ConfigError("DriftField: negative sup bound");
}

DriftField DriftField::zero(std::size_t dim) {
  DriftField f(
      dim, [](double, std::span<const double>, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
      },
      0.0, "zero");
  f.zero_ = true;
  return f;
}

DriftField DriftField::constant(std::vector<double> value) {
  const std::size_t dim = value.size();
  const double bound = linalg::norm(value);
  const bool all_zero = bound == 0.0;
  DriftField f(
      dim,
      [value = std::move(value)](double, std::span<const double>, std::span<double> out) {
        std::copy(value.begin(), value.end(), out.begin());
      },
      bound, "constant");
  f.zero_ = all_zero;
  return f;
}

DriftField DriftField::sign(std::size_t dim, double scale) {
  DriftField f(
      dim,
      [scale](double, std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * sgn(x[i]);
      },
      std::abs(scale) * std::sqrt(static_cast<double>(dim)), "sgn");
  f.zero_ = scale == 0.0;
  return f;
}

DriftField DriftField::regime_switching(std::vector<double> inside, std::vector<double> outside,
                                        double threshold) {
  if (inside.size() != outside.size() || inside.empty()) {
    throw ConfigError("regime_switching: regime vectors must have equal, positive length");
  }
  const std::size_t dim = inside.size();
  const double bound = std::max(linalg::norm(inside), linalg::norm(outside));
  return DriftField(
      dim,
      [inside = std::move(inside), outside = std::move(outside), threshold](
          double, std::span<const double> x, std::span<double> out) {
        const auto& v = x[0] < threshold ? inside : outside;
        std::copy(v.begin(), v.end(), out.begin());
      },
      bound, "regime");
}

DiffusionField::DiffusionField(std::size_t dim, Rule rule, double sup_bound, double ellipticity,
                               std::string name)
    : dim_(dim),
      rule_(std::move(rule)),
      sup_bound_(sup_bound),
      ellipticity_(ellipticity),
      name_(std::move(name)) {
  if (dim_ == 0) throw ConfigError("DiffusionField: dimension must be >= 1");
  if (!rule_) throw ConfigError("DiffusionField: empty rule");
  if (!(sup_bound_ >= 0.0)) throw ConfigError("DiffusionField: negative sup bound");
}

DiffusionField DiffusionField::identity(std::size_t dim, double scale) {
  return DiffusionField(
      dim,
      [dim, scale](double, std::span<const double>, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < dim; ++i) out[i * dim + i] = scale;
      },
      std::abs(scale), scale, "identity");
}

DiffusionField DiffusionField::constant(std::size_t dim, std::vector<double> matrix) {
  if (matrix.size() != dim * dim) throw ConfigError("DiffusionField::constant: need d*d entries");
  const double bound = linalg::spectral_norm(matrix, dim);
  const double lambda = linalg::ellipticity(matrix, dim);
  return DiffusionField(
      dim,
      [matrix = std::move(matrix)](double, std::span<const double>, std::span<double> out) {
        std::copy(matrix.begin(), matrix.end(), out.begin());
      },
      bound, lambda, "constant");
}

DiffusionField DiffusionField::diagonal_time(std::size_t dim,
                                             std::function<double(std::size_t, double)> entry,
                                             double lo, double hi) {
  if (!(lo > 0.0 && hi >= lo)) throw ConfigError("diagonal_time: need 0 < lo <= hi");
  return DiffusionField(
      dim,
      [dim, entry = std::move(entry)](double t, std::span<const double>, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < dim; ++i) out[i * dim + i] = entry(i, t);
      },
      hi, lo, "diagonal");
}

FieldAudit audit_fields(const DriftField& drift, const DiffusionField& diffusion,
                        std::span<const double> points) {
  const std::size_t d = drift.dim();
  if (diffusion.dim() != d) throw std::invalid_argument("audit_fields: dimension mismatch");
  const std::size_t row = d + 1;
  FieldAudit audit;
  std::vector<double> b(d), s(d * d);
  for (std::size_t p = 0; p + row <= points.size(); p += row) {
    const double t = points[p];
    const auto x = points.subspan(p + 1, d);
    drift(t, x, b);
    if (drift.sup_bound()) {
      audit.worst_drift_excess =
          std::max(audit.worst_drift_excess, linalg::norm(b) - *drift.sup_bound());
    }
    diffusion(t, x, s);
    audit.worst_sigma_norm_excess = std::max(
        audit.worst_sigma_norm_excess, linalg::spectral_norm(s, d) - diffusion.sup_bound());
    audit.worst_ellipticity_deficit = std::max(
        audit.worst_ellipticity_deficit, diffusion.ellipticity() - linalg::ellipticity(s, d));
  }
  return audit;
}

}  // namespace t2c
