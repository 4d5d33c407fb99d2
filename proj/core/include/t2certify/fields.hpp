// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace t2c {

// Space-time integrability exponents of a drift in L^p_q.
struct Integrability {
  double p = 0.0;
  double q = 0.0;

  // d/p + 2/q < 1, p >= 2(d+1), q > 2.
  bool admissible(std::size_t dim) const noexcept;
};

// b : [0,T] x R^d -> R^d. Measurable drifts are written as explicit case
// splits so evaluation is total; sgn(0) is 0 throughout.
class DriftField {
 public:
  using Rule = std::function<void(double t, std::span<const double> x, std::span<double> out)>;

  DriftField(std::size_t dim, Rule rule, std::optional<double> sup_bound = std::nullopt,
             std::string name = "custom");

  static DriftField zero(std::size_t dim);
  static DriftField constant(std::vector<double> value);
  // b_i(x) = scale * sgn(x_i)
  static DriftField sign(std::size_t dim, double scale = 1.0);
  // b(x) = inside if x_1 < threshold, else outside.
  static DriftField regime_switching(std::vector<double> inside, std::vector<double> outside,
                                     double threshold = 0.0);

  void operator()(double t, std::span<const double> x, std::span<double> out) const {
    rule_(t, x, out);
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::optional<double>& sup_bound() const noexcept { return sup_bound_; }
  const std::optional<Integrability>& integrability() const noexcept { return integrability_; }
  DriftField& with_integrability(Integrability pq) {
    integrability_ = pq;
    return *this;
  }
  bool is_zero() const noexcept { return zero_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::size_t dim_;
  Rule rule_;
  std::optional<double> sup_bound_;
  std::optional<Integrability> integrability_;
  bool zero_ = false;
  std::string name_;
};

// sigma : [0,T] x R^d -> R^{d x d}, row-major. `sup_bound` is a spectral-norm
// bound; `ellipticity` the lambda in xi^T sigma xi >= lambda |xi|^2.
class DiffusionField {
 public:
  using Rule = std::function<void(double t, std::span<const double> x, std::span<double> out)>;

  DiffusionField(std::size_t dim, Rule rule, double sup_bound, double ellipticity,
                 std::string name = "custom");

  static DiffusionField identity(std::size_t dim, double scale = 1.0);
  static DiffusionField constant(std::size_t dim, std::vector<double> matrix);
  // sigma = diag(s_1(t), ..., s_d(t)) with lo <= s_i(t) <= hi.
  static DiffusionField diagonal_time(std::size_t dim,
                                      std::function<double(std::size_t, double)> entry, double lo,
                                      double hi);

  void operator()(double t, std::span<const double> x, std::span<double> out) const {
    rule_(t, x, out);
  }

  std::size_t dim() const noexcept { return dim_; }
  double sup_bound() const noexcept { return sup_bound_; }
  double ellipticity() const noexcept { return ellipticity_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::size_t dim_;
  Rule rule_;
  double sup_bound_;
  double ellipticity_;
  std::string name_;
};

// Largest violation found when probing declared bounds at the given points.
struct FieldAudit {
  double worst_drift_excess = 0.0;         // max(|b| - sup_bound)
  double worst_sigma_norm_excess = 0.0;    // max(||sigma||_2 - sup_bound)
  double worst_ellipticity_deficit = 0.0;  // max(lambda - min xi^T sigma xi)
};

// Points are (t, x) with x of length dim, packed as [t, x_1..x_d] per row.
FieldAudit audit_fields(const DriftField& drift, const DiffusionField& diffusion,
                        std::span<const double> points);

}  // namespace t2c
