// SPDX-License-Identifier: MIT
#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "t2certify/fields.hpp"
#include "t2certify/noise.hpp"
#include "t2certify/time_grid.hpp"

namespace t2c {

// Uniform tensor grid on [-L, L]^d (d = 1 or 2) times a TimeGrid.
class PdeGrid {
 public:
  PdeGrid(std::size_t dim, double half_width, double step, TimeGrid time);

  std::size_t dim() const noexcept { return dim_; }
  double half_width() const noexcept { return half_width_; }
  double step() const noexcept { return step_; }
  const TimeGrid& time() const noexcept { return time_; }
  std::size_t per_axis() const noexcept { return per_axis_; }
  std::size_t node_count() const noexcept { return node_count_; }

  double coordinate(std::size_t i) const noexcept {
    return -half_width_ + static_cast<double>(i) * step_;
  }
  // Axis indices of a flat node index (axis 0 varies fastest).
  std::size_t axis_index(std::size_t node, std::size_t axis) const noexcept {
    return axis == 0 ? node % per_axis_ : node / per_axis_;
  }
  std::size_t stride(std::size_t axis) const noexcept { return axis == 0 ? 1 : per_axis_; }
  void position(std::size_t node, std::span<double> x) const noexcept;

  // True if every coordinate of node lies within `margin` of the centre box,
  // i.e. |x_i| <= L - margin.
  bool interior(std::size_t node, double margin) const noexcept;

 private:
  std::size_t dim_;
  double half_width_;
  double step_;
  TimeGrid time_;
  std::size_t per_axis_;
  std::size_t node_count_;
};

// `components` scalar grid functions on every node and time level.
// Interpolation is multilinear in space and linear in time; points outside
// the box are clamped onto it.
class VectorField {
 public:
  VectorField(PdeGrid grid, std::size_t components);

  const PdeGrid& grid() const noexcept { return grid_; }
  std::size_t components() const noexcept { return components_; }

  std::span<double> level(std::size_t component, std::size_t k) noexcept {
    return {values_.data() + (k * components_ + component) * grid_.node_count(),
            grid_.node_count()};
  }
  std::span<const double> level(std::size_t component, std::size_t k) const noexcept {
    return {values_.data() + (k * components_ + component) * grid_.node_count(),
            grid_.node_count()};
  }

  double interpolate(std::size_t component, double t, std::span<const double> x) const;

  // Central difference along `axis` at a node (one-sided on the box edge).
  double derivative(std::size_t component, std::size_t k, std::size_t node,
                    std::size_t axis) const noexcept;

 private:
  PdeGrid grid_;
  std::size_t components_;
  std::vector<double> values_;
};

// Which hypothesis an experiment claims. Both are solved through the same
// zero-terminal-data PDE; the tag only controls validation and reporting.
enum class TheoremCase { bounded_drift, integrable_drift };

struct ZvonkinConfig {
  DriftField drift;
  DiffusionField diffusion;
  double c_b = 1.0;
  TheoremCase theorem_case = TheoremCase::bounded_drift;
  double solve_tolerance = 1e-8;  // max residual of the discrete scheme

  void validate() const;  // throws ConfigError
};

// Solves, for every component i,
//   d_t u^i + b . grad u^i + 1/2 tr(a D^2 u^i) + b^i / (1 + C_b) = 0,  u^i(T) = 0,
// with a = sigma sigma^T, backward in time with Crank-Nicolson (1-D) or
// Douglas ADI with theta = 1/2 (2-D, mixed derivative explicit), central
// differences and homogeneous Neumann conditions on the box.
// Throws NumericalError on a singular tridiagonal pivot or when the discrete
// residual exceeds solve_tolerance.
VectorField zvonkin_solve(const ZvonkinConfig& config, const PdeGrid& grid);

struct GradientCheck {
  double sup_grad = 0.0;
  double bound = 0.0;  // C_b / (1 + C_b)
  bool pass = false;
};

// sup over levels and nodes at distance >= boundary_layer from the box edge
// of |grad u^i|; pass iff sup_grad <= C_b/(1+C_b) + tolerance.
GradientCheck gradient_bound_check(const VectorField& u, double c_b, double tolerance,
                                   double boundary_layer);

struct ControlledSolve {
  VectorField u;
  double c_b = 0.0;
  GradientCheck gradient;
  std::size_t rounds = 0;
};

// Solves, checks the gradient bound, and doubles C_b (0 -> 1) until it
// passes. Throws NumericalError after max_rounds failed attempts.
ControlledSolve solve_with_gradient_control(ZvonkinConfig config, const PdeGrid& grid,
                                            double tolerance, double boundary_layer,
                                            std::size_t max_rounds = 10);

struct ResidualRegion {
  double boundary_layer = 0.5;  // spatial margin from the box edge
  double terminal_layer = 0.0;  // levels with T - t < terminal_layer are skipped
};

struct ResidualReport {
  double max_abs = 0.0;
  std::size_t checked = 0;
  std::size_t excluded_discontinuity = 0;
};

// Residual of the continuous equation evaluated on the grid solution with
// fourth-order stencils in space and time. Nodes whose stencil straddles a
// jump of the drift are excluded, since the equation only holds a.e. there.
ResidualReport pde_residual(const VectorField& u, const ZvonkinConfig& config,
                            const ResidualRegion& region);

// Phi = x + u on every node.
VectorField build_phi(const VectorField& u);

// u -> factor * u, e.g. (1 + C_b) u, which solves the equation with source b.
VectorField rescale(const VectorField& u, double factor);

// Solves Phi(t, x) = y by x <- x - (Phi(t, x) - y) until |Phi(t,x) - y| <= tol.
// Phi is extended affinely outside the box. Throws NumericalError if the
// iteration does not converge.
void invert_phi(const VectorField& phi, double t, std::span<const double> y, std::span<double> x,
                double tol = 1e-10, std::size_t max_iter = 2000);

// Phi, its inverse and Jacobian as continuous maps.
class ZvonkinTransform {
 public:
  ZvonkinTransform(const VectorField& u, double c_b);

  std::size_t dim() const noexcept { return phi_.grid().dim(); }
  double c_b() const noexcept { return c_b_; }
  const VectorField& phi_field() const noexcept { return phi_; }

  void phi(double t, std::span<const double> x, std::span<double> out) const;
  void psi(double t, std::span<const double> y, std::span<double> out, double tol = 1e-10) const;
  // d Phi^i / d x_j, row-major.
  void jacobian(double t, std::span<const double> x, std::span<double> out) const;
  bool inside(std::span<const double> x) const noexcept;

 private:
  VectorField phi_;
  VectorField grad_;  // d*d components
  double c_b_;
};

struct BiLipschitzReport {
  double lower_bound = 0.0;  // 1 / (1 + C_b)
  double upper_bound = 0.0;  // (1 + 2 C_b) / (1 + C_b)
  double min_ratio = 0.0;    // min |Phi(x) - Phi(y)| / |x - y| over the sample
  double max_ratio = 0.0;
  std::size_t pairs = 0;
  std::size_t violations = 0;
  std::vector<double> first_violation;  // t, x..., y...
  bool pass = false;
};

// Samples pairs at random times inside the box minus the boundary layer; half
// of the pairs are local (|x - y| <= 5h) to probe the gradient scale.
BiLipschitzReport phi_bilipschitz_check(const ZvonkinTransform& transform, double c_b,
                                        std::size_t pairs, const NoiseSource& noise,
                                        double boundary_layer, double tolerance);

struct TransformedDiffusion {
  DiffusionField field;
  // Count of evaluations where Psi(t, y) left the box and the affine
  // extension was used.
  std::shared_ptr<std::atomic<std::size_t>> extension_hits;
};

// sigma~(t, y) = (D Phi sigma)(t, Psi(t, y)).
TransformedDiffusion transformed_sigma(const DiffusionField& sigma,
                                       std::shared_ptr<const ZvonkinTransform> transform);

struct TransformStats {
  double lip_phi = 1.0;          // sup of the largest singular value of D Phi
  double lip_psi = 1.0;          // 1 / inf of the smallest singular value of D Phi
  double sup_sigma_tilde = 0.0;  // sup || D Phi sigma ||_2
};

// Grid scan over interior nodes and all levels.
TransformStats measure_transform(const ZvonkinTransform& transform, const DiffusionField& sigma,
                                 double boundary_layer);

using SpaceTimeMap =
    std::function<void(double t, std::span<const double> x, std::span<double> out)>;

struct MartingaleBlock {
  std::size_t first_step = 0;
  std::size_t last_step = 0;
  std::size_t component = 0;
  double mean = 0.0;  // mean of Y(last) - Y(first)
  double mean_stderr = 0.0;
  double p_mean = 1.0;
  double slope = 0.0;  // OLS slope of the increment on Y(first)
  double slope_stderr = 0.0;
  double p_slope = 1.0;  // 1 when the slope is not testable (degenerate Y(first))
  bool slope_tested = false;
};

struct MartingaleReport {
  std::vector<MartingaleBlock> blocks;
  std::size_t paths = 0;
  double alpha = 0.01;
  double per_test_level = 0.01;  // Bonferroni: alpha / number of tests
  double min_p = 1.0;
  bool pass = false;
};

struct MartingaleOptions {
  std::size_t paths = 100000;
  std::size_t blocks = 10;
  double alpha = 0.01;
  std::size_t workers = 1;
};

// Simulates X under (drift, diffusion), maps Y_k = phi(t_k, X_k), and tests
// per block of steps that the increments of Y have zero mean and are
// uncorrelated with the block's starting value.
MartingaleReport driftless_residual_check(const SpaceTimeMap& phi, const DriftField& drift,
                                          const DiffusionField& diffusion,
                                          std::span<const double> x0, const TimeGrid& grid,
                                          const NoiseSource& noise,
                                          const MartingaleOptions& options);

// CSV with header t,x[,y],u1[,u2],grad; every `level_stride`-th level.
void export_field_csv(const VectorField& u, std::ostream& out, std::size_t level_stride = 1);

}  // namespace t2c
