// SPDX-License-Identifier: MIT
#include "t2certify/zvonkin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "t2certify/error.hpp"
#include "t2certify/linalg.hpp"
#include "t2certify/parallel.hpp"
#include "t2certify/sde.hpp"
#include "t2certify/stats.hpp"

namespace t2c {

// ---------------------------------------------------------------------------
// Grid and fields
// ---------------------------------------------------------------------------

PdeGrid::PdeGrid(std::size_t dim, double half_width, double step, TimeGrid time)
    : dim_(dim), half_width_(half_width), step_(step), time_(time) {
  if (dim_ != 1 && dim_ != 2) throw ConfigError("PdeGrid: only d = 1 and d = 2 are supported");
  if (!(half_width_ > 0.0)) throw ConfigError("PdeGrid: L must be > 0");
  if (!(step_ > 0.0)) throw ConfigError("PdeGrid: h must be > 0");
  const double cells = 2.0 * half_width_ / step_;
  const double rounded = std::round(cells);
  if (rounded < 4.0 || std::abs(cells - rounded) > 1e-6 * rounded) {
    throw ConfigError("PdeGrid: h must divide 2L into at least 4 cells");
  }
  per_axis_ = static_cast<std::size_t>(rounded) + 1;
  node_count_ = dim_ == 1 ? per_axis_ : per_axis_ * per_axis_;
}

void PdeGrid::position(std::size_t node, std::span<double> x) const noexcept {
  for (std::size_t a = 0; a < dim_; ++a) x[a] = coordinate(axis_index(node, a));
}

bool PdeGrid::interior(std::size_t node, double margin) const noexcept {
  for (std::size_t a = 0; a < dim_; ++a) {
    if (std::abs(coordinate(axis_index(node, a))) > half_width_ - margin + 1e-12) return false;
  }
  return true;
}

VectorField::VectorField(PdeGrid grid, std::size_t components)
    : grid_(grid),
      components_(components),
      values_(grid.time().nodes() * components * grid.node_count(), 0.0) {}

namespace {

struct Cell {
  std::size_t index = 0;
  double frac = 0.0;
};

Cell locate(const PdeGrid& g, double x) noexcept {
  const double p = std::clamp(x, -g.half_width(), g.half_width());
  const double s = (p + g.half_width()) / g.step();
  const double last = static_cast<double>(g.per_axis() - 2);
  const double i = std::clamp(std::floor(s), 0.0, last);
  return {static_cast<std::size_t>(i), std::clamp(s - i, 0.0, 1.0)};
}

double interpolate_level(const PdeGrid& g, std::span<const double> level,
                         std::span<const double> x) noexcept {
  const Cell cx = locate(g, x[0]);
  if (g.dim() == 1) {
    return (1.0 - cx.frac) * level[cx.index] + cx.frac * level[cx.index + 1];
  }
  const Cell cy = locate(g, x[1]);
  const std::size_t m = g.per_axis();
  const std::size_t base = cy.index * m + cx.index;
  const double lo = (1.0 - cx.frac) * level[base] + cx.frac * level[base + 1];
  const double hi = (1.0 - cx.frac) * level[base + m] + cx.frac * level[base + m + 1];
  return (1.0 - cy.frac) * lo + cy.frac * hi;
}

struct TimeCell {
  std::size_t level = 0;
  double frac = 0.0;
};

TimeCell locate_time(const TimeGrid& tg, double t) noexcept {
  const double s = std::clamp(t / tg.dt(), 0.0, static_cast<double>(tg.steps()));
  const double k = std::min(std::floor(s), static_cast<double>(tg.steps() - 1));
  return {static_cast<std::size_t>(k), std::clamp(s - k, 0.0, 1.0)};
}

}  // namespace

double VectorField::interpolate(std::size_t component, double t, std::span<const double> x) const {
  const TimeCell tc = locate_time(grid_.time(), t);
  const double v0 = interpolate_level(grid_, level(component, tc.level), x);
  if (tc.frac == 0.0) return v0;
  const double v1 = interpolate_level(grid_, level(component, tc.level + 1), x);
  return (1.0 - tc.frac) * v0 + tc.frac * v1;
}

double VectorField::derivative(std::size_t component, std::size_t k, std::size_t node,
                               std::size_t axis) const noexcept {
  const auto u = level(component, k);
  const std::size_t i = grid_.axis_index(node, axis);
  const std::size_t st = grid_.stride(axis);
  const double h = grid_.step();
  if (i == 0) return (u[node + st] - u[node]) / h;
  if (i + 1 == grid_.per_axis()) return (u[node] - u[node - st]) / h;
  return (u[node + st] - u[node - st]) / (2.0 * h);
}

// ---------------------------------------------------------------------------
// PDE solve
// ---------------------------------------------------------------------------

void ZvonkinConfig::validate() const {
  const std::size_t d = drift.dim();
  if (diffusion.dim() != d) throw ConfigError("zvonkin: drift and diffusion dimensions differ");
  if (d != 1 && d != 2) throw ConfigError("zvonkin: the PDE is solved for d = 1, 2 only");
  if (!(c_b >= 0.0) || !std::isfinite(c_b)) throw ConfigError("zvonkin: C_b must be >= 0");
  if (!(diffusion.ellipticity() > 0.0)) throw ConfigError("zvonkin: diffusion must be elliptic");
  if (theorem_case == TheoremCase::integrable_drift) {
    if (!drift.integrability()) {
      throw ConfigError("zvonkin: integrable-drift case needs declared exponents (p, q)");
    }
    if (!drift.integrability()->admissible(d)) {
      throw ConfigError("zvonkin: exponents violate d/p + 2/q < 1, p >= 2(d+1), q > 2");
    }
  } else if (!drift.sup_bound()) {
    throw ConfigError("zvonkin: bounded-drift case needs a declared sup bound");
  }
}

namespace {

// Drift and a = sigma sigma^T sampled on every node at one time.
struct Coefficients {
  std::size_t dim = 1;
  std::vector<double> drift;  // [axis][node]
  std::vector<double> diff;   // [a][b][node]
  std::size_t nodes = 0;

  double b(std::size_t axis, std::size_t node) const noexcept { return drift[axis * nodes + node]; }
  double a(std::size_t r, std::size_t c, std::size_t node) const noexcept {
    return diff[(r * dim + c) * nodes + node];
  }
};

Coefficients sample_coefficients(const ZvonkinConfig& cfg, const PdeGrid& g, double t) {
  const std::size_t d = g.dim();
  Coefficients c;
  c.dim = d;
  c.nodes = g.node_count();
  c.drift.resize(d * c.nodes);
  c.diff.resize(d * d * c.nodes);
  std::vector<double> x(d), b(d), s(d * d);
  for (std::size_t node = 0; node < c.nodes; ++node) {
    g.position(node, x);
    cfg.drift(t, x, b);
    cfg.diffusion(t, x, s);
    for (std::size_t a = 0; a < d; ++a) c.drift[a * c.nodes + node] = b[a];
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t col = 0; col < d; ++col) {
        double acc = 0.0;
        for (std::size_t m = 0; m < d; ++m) acc += s[r * d + m] * s[col * d + m];
        c.diff[(r * d + col) * c.nodes + node] = acc;
      }
    }
  }
  return c;
}

// Second-order central first derivative with the Neumann mirror (zero on the
// boundary face).
inline double d1(std::span<const double> u, const PdeGrid& g, std::size_t node,
                 std::size_t axis) noexcept {
  const std::size_t i = g.axis_index(node, axis);
  if (i == 0 || i + 1 == g.per_axis()) return 0.0;
  const std::size_t st = g.stride(axis);
  return (u[node + st] - u[node - st]) / (2.0 * g.step());
}

inline double d2(std::span<const double> u, const PdeGrid& g, std::size_t node,
                 std::size_t axis) noexcept {
  const std::size_t i = g.axis_index(node, axis);
  const std::size_t st = g.stride(axis);
  const double h2 = g.step() * g.step();
  if (i == 0) return 2.0 * (u[node + st] - u[node]) / h2;
  if (i + 1 == g.per_axis()) return 2.0 * (u[node - st] - u[node]) / h2;
  return (u[node + st] - 2.0 * u[node] + u[node - st]) / h2;
}

// out += scale * A_axis u, A_axis = b_axis D1 + 1/2 a_axis,axis D2.
void add_axis_operator(const Coefficients& c, const PdeGrid& g, std::size_t axis,
                       std::span<const double> u, double scale, std::span<double> out) {
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    out[node] += scale * (c.b(axis, node) * d1(u, g, node, axis) +
                          0.5 * c.a(axis, axis, node) * d2(u, g, node, axis));
  }
}

// out += scale * a_01 D1_0 D1_1 u (the cross term of 1/2 tr(a D^2 u)).
void add_mixed_operator(const Coefficients& c, const PdeGrid& g, std::span<const double> u,
                        double scale, std::span<double> out) {
  const std::size_t m = g.per_axis();
  const double h = g.step();
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    const std::size_t i = g.axis_index(node, 0);
    const std::size_t j = g.axis_index(node, 1);
    if (i == 0 || j == 0 || i + 1 == m || j + 1 == m) continue;
    const double a01 = 0.5 * (c.a(0, 1, node) + c.a(1, 0, node));
    if (a01 == 0.0) continue;
    const double uxy =
        (u[node + m + 1] - u[node + m - 1] - u[node - m + 1] + u[node - m - 1]) / (4.0 * h * h);
    out[node] += scale * a01 * uxy;
  }
}

class TridiagonalSolver {
 public:
  explicit TridiagonalSolver(std::size_t n) : lower_(n), diag_(n), upper_(n), rhs_(n), c_(n), d_(n) {}

  std::vector<double>& lower() { return lower_; }
  std::vector<double>& diag() { return diag_; }
  std::vector<double>& upper() { return upper_; }
  std::vector<double>& rhs() { return rhs_; }

  // Thomas algorithm; returns the max residual of the solved system.
  double solve(std::span<double> x) {
    const std::size_t n = diag_.size();
    double pivot = diag_[0];
    if (std::abs(pivot) < 1e-300) throw NumericalError("zvonkin", "singular tridiagonal pivot");
    c_[0] = upper_[0] / pivot;
    d_[0] = rhs_[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
      pivot = diag_[i] - lower_[i] * c_[i - 1];
      if (std::abs(pivot) < 1e-300 || !std::isfinite(pivot)) {
        throw NumericalError("zvonkin", "singular tridiagonal pivot at row " + std::to_string(i));
      }
      c_[i] = upper_[i] / pivot;
      d_[i] = (rhs_[i] - lower_[i] * d_[i - 1]) / pivot;
    }
    x[n - 1] = d_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d_[i] - c_[i] * x[i + 1];

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = diag_[i] * x[i] - rhs_[i];
      if (i > 0) r += lower_[i] * x[i - 1];
      if (i + 1 < n) r += upper_[i] * x[i + 1];
      worst = std::max(worst, std::abs(r));
    }
    return worst;
  }

 private:
  std::vector<double> lower_, diag_, upper_, rhs_, c_, d_;
};

// Solves (I - theta dt A_axis) y = rhs line by line; returns the max residual.
double implicit_axis_solve(const Coefficients& c, const PdeGrid& g, std::size_t axis,
                           double theta_dt, std::span<const double> rhs, std::span<double> y) {
  const std::size_t m = g.per_axis();
  const std::size_t st = g.stride(axis);
  const std::size_t lines = g.node_count() / m;
  const double h = g.step();
  TridiagonalSolver tri(m);
  std::vector<double> line(m);
  double worst = 0.0;
  for (std::size_t l = 0; l < lines; ++l) {
    const std::size_t start = axis == 0 ? l * m : l;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t node = start + i * st;
      const double diff = 0.5 * c.a(axis, axis, node) / (h * h);
      const double adv = c.b(axis, node) / (2.0 * h);
      double lo = diff - adv;
      double up = diff + adv;
      if (i == 0) {
        up = 2.0 * diff;
        lo = 0.0;
      } else if (i + 1 == m) {
        lo = 2.0 * diff;
        up = 0.0;
      }
      tri.lower()[i] = -theta_dt * lo;
      tri.upper()[i] = -theta_dt * up;
      tri.diag()[i] = 1.0 + theta_dt * 2.0 * diff;
      tri.rhs()[i] = rhs[node];
    }
    worst = std::max(worst, tri.solve(line));
    for (std::size_t i = 0; i < m; ++i) y[start + i * st] = line[i];
  }
  return worst;
}

}  // namespace

VectorField zvonkin_solve(const ZvonkinConfig& config, const PdeGrid& grid) {
  config.validate();
  if (grid.dim() != config.drift.dim()) throw ConfigError("zvonkin: grid dimension mismatch");
  const std::size_t d = grid.dim();
  const std::size_t nodes = grid.node_count();
  const TimeGrid& tg = grid.time();
  const double dt = tg.dt();
  const double theta = 0.5;
  const double source_scale = 1.0 / (1.0 + config.c_b);

  VectorField u(grid, d);  // level n is the zero terminal condition
  Coefficients next = sample_coefficients(config, grid, tg.time(tg.steps()));
  std::vector<double> y0(nodes), y1(nodes), work(nodes);
  double worst = 0.0;

  for (std::size_t k = tg.steps(); k-- > 0;) {
    Coefficients cur = sample_coefficients(config, grid, tg.time(k));
    for (std::size_t comp = 0; comp < d; ++comp) {
      const auto un = u.level(comp, k + 1);
      // Explicit predictor with the full operator at t_{k+1}.
      for (std::size_t node = 0; node < nodes; ++node) {
        y0[node] = un[node] + dt * source_scale * 0.5 *
                                  (cur.b(comp, node) + next.b(comp, node));
      }
      for (std::size_t a = 0; a < d; ++a) add_axis_operator(next, grid, a, un, dt, y0);
      if (d == 2) add_mixed_operator(next, grid, un, dt, y0);
      // One implicit correction per axis.
      std::span<const double> stage = y0;
      for (std::size_t a = 0; a < d; ++a) {
        std::copy(stage.begin(), stage.end(), work.begin());
        add_axis_operator(next, grid, a, un, -theta * dt, work);
        auto target = a + 1 == d ? u.level(comp, k) : std::span<double>(y1);
        worst = std::max(worst, implicit_axis_solve(cur, grid, a, theta * dt, work, target));
        stage = target;
      }
    }
    next = std::move(cur);
  }
  if (!(worst <= config.solve_tolerance)) {
    throw NumericalError("zvonkin", "discrete residual " + std::to_string(worst) +
                                        " exceeds tolerance " +
                                        std::to_string(config.solve_tolerance));
  }
  return u;
}

GradientCheck gradient_bound_check(const VectorField& u, double c_b, double tolerance,
                                   double boundary_layer) {
  const PdeGrid& g = u.grid();
  GradientCheck out;
  out.bound = c_b / (1.0 + c_b);
  for (std::size_t k = 0; k < g.time().nodes(); ++k) {
    for (std::size_t comp = 0; comp < u.components(); ++comp) {
      for (std::size_t node = 0; node < g.node_count(); ++node) {
        if (!g.interior(node, boundary_layer)) continue;
        double s = 0.0;
        for (std::size_t a = 0; a < g.dim(); ++a) {
          const double v = u.derivative(comp, k, node, a);
          s += v * v;
        }
        out.sup_grad = std::max(out.sup_grad, std::sqrt(s));
      }
    }
  }
  out.pass = out.sup_grad <= out.bound + tolerance;
  return out;
}

ControlledSolve solve_with_gradient_control(ZvonkinConfig config, const PdeGrid& grid,
                                            double tolerance, double boundary_layer,
                                            std::size_t max_rounds) {
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    VectorField u = zvonkin_solve(config, grid);
    const GradientCheck check = gradient_bound_check(u, config.c_b, tolerance, boundary_layer);
    if (check.pass) return {std::move(u), config.c_b, check, round};
    config.c_b = config.c_b == 0.0 ? 1.0 : 2.0 * config.c_b;
  }
  throw NumericalError("zvonkin", "gradient bound still violated after " +
                                      std::to_string(max_rounds) + " rounds of doubling C_b");
}

// ---------------------------------------------------------------------------
// Consistency residual
// ---------------------------------------------------------------------------

namespace {

// Fourth-order central first derivative along an axis.
inline double d1_4(std::span<const double> u, std::size_t node, std::size_t st, double h) noexcept {
  return (-u[node + 2 * st] + 8.0 * u[node + st] - 8.0 * u[node - st] + u[node - 2 * st]) /
         (12.0 * h);
}

inline double d2_4(std::span<const double> u, std::size_t node, std::size_t st, double h) noexcept {
  return (-u[node + 2 * st] + 16.0 * u[node + st] - 30.0 * u[node] + 16.0 * u[node - st] -
          u[node - 2 * st]) /
         (12.0 * h * h);
}

constexpr std::array<double, 5> kD1Weights = {1.0, -8.0, 0.0, 8.0, -1.0};  // offsets -2..2, /12h

}  // namespace

ResidualReport pde_residual(const VectorField& u, const ZvonkinConfig& config,
                            const ResidualRegion& region) {
  config.validate();
  const PdeGrid& g = u.grid();
  const std::size_t d = g.dim();
  const std::size_t m = g.per_axis();
  const std::size_t nodes = g.node_count();
  const TimeGrid& tg = g.time();
  const double h = g.step();
  const double dt = tg.dt();
  const double source_scale = 1.0 / (1.0 + config.c_b);
  ResidualReport report;
  if (tg.steps() < 3) return report;

  // A node whose 5-point stencil meets a jump of the drift between adjacent
  // nodes is excluded. Lipschitz drifts move by O(h) per node; jumps by O(1).
  double drift_scale = config.drift.sup_bound().value_or(0.0);
  const double jump_threshold = std::sqrt(h) * (1.0 + drift_scale);

  std::vector<double> um(nodes), ut(nodes);
  std::vector<char> jump(nodes), regular(nodes);
  for (std::size_t k = 1; k + 2 <= tg.steps(); ++k) {
    if (tg.horizon() - tg.time(k) < region.terminal_layer) continue;
    const double tm = 0.5 * (tg.time(k) + tg.time(k + 1));
    const Coefficients c = sample_coefficients(config, g, tm);

    std::fill(jump.begin(), jump.end(), 0);
    for (std::size_t node = 0; node < nodes; ++node) {
      for (std::size_t a = 0; a < d; ++a) {
        if (g.axis_index(node, a) + 1 >= m) continue;
        const std::size_t nb = node + g.stride(a);
        for (std::size_t comp = 0; comp < d; ++comp) {
          if (std::abs(c.b(comp, nb) - c.b(comp, node)) > jump_threshold) {
            jump[node] = 1;
            jump[nb] = 1;
          }
        }
      }
    }
    for (std::size_t node = 0; node < nodes; ++node) {
      bool ok = g.interior(node, region.boundary_layer);
      for (std::size_t a = 0; a < d && ok; ++a) {
        const std::size_t i = g.axis_index(node, a);
        ok = i >= 2 && i + 2 < m;
      }
      if (ok) {
        // Scan the 5^d box around the node.
        const std::size_t i0 = g.axis_index(node, 0);
        const std::size_t j0 = d == 2 ? g.axis_index(node, 1) : 0;
        for (std::size_t j = (d == 2 ? j0 - 2 : 0); j <= (d == 2 ? j0 + 2 : 0) && ok; ++j) {
          for (std::size_t i = i0 - 2; i <= i0 + 2; ++i) {
            if (jump[j * m + i]) {
              ok = false;
              break;
            }
          }
        }
        if (!ok) ++report.excluded_discontinuity;
      }
      regular[node] = ok;
    }

    for (std::size_t comp = 0; comp < d; ++comp) {
      const auto a0 = u.level(comp, k - 1);
      const auto a1 = u.level(comp, k);
      const auto a2 = u.level(comp, k + 1);
      const auto a3 = u.level(comp, k + 2);
      for (std::size_t node = 0; node < nodes; ++node) {
        um[node] = (-a0[node] + 9.0 * a1[node] + 9.0 * a2[node] - a3[node]) / 16.0;
        ut[node] = (a0[node] - 27.0 * a1[node] + 27.0 * a2[node] - a3[node]) / (24.0 * dt);
      }
      for (std::size_t node = 0; node < nodes; ++node) {
        if (!regular[node]) continue;
        double r = ut[node] + source_scale * c.b(comp, node);
        for (std::size_t a = 0; a < d; ++a) {
          const std::size_t st = g.stride(a);
          r += c.b(a, node) * d1_4(um, node, st, h) + 0.5 * c.a(a, a, node) * d2_4(um, node, st, h);
        }
        if (d == 2) {
          const double a01 = 0.5 * (c.a(0, 1, node) + c.a(1, 0, node));
          if (a01 != 0.0) {
            double uxy = 0.0;
            for (int p = 0; p < 5; ++p) {
              for (int q = 0; q < 5; ++q) {
                const std::size_t nb = node + static_cast<std::size_t>(q) * m +
                                       static_cast<std::size_t>(p) - 2 * m - 2;
                uxy += kD1Weights[static_cast<std::size_t>(p)] *
                       kD1Weights[static_cast<std::size_t>(q)] * um[nb];
              }
            }
            r += a01 * uxy / (144.0 * h * h);
          }
        }
        report.max_abs = std::max(report.max_abs, std::abs(r));
        ++report.checked;
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Transform
// ---------------------------------------------------------------------------

VectorField build_phi(const VectorField& u) {
  const PdeGrid& g = u.grid();
  VectorField phi(g, u.components());
  std::vector<double> x(g.dim());
  for (std::size_t k = 0; k < g.time().nodes(); ++k) {
    for (std::size_t comp = 0; comp < u.components(); ++comp) {
      const auto src = u.level(comp, k);
      auto dst = phi.level(comp, k);
      for (std::size_t node = 0; node < g.node_count(); ++node) {
        g.position(node, x);
        dst[node] = x[comp] + src[node];
      }
    }
  }
  return phi;
}

VectorField rescale(const VectorField& u, double factor) {
  VectorField out(u.grid(), u.components());
  for (std::size_t k = 0; k < u.grid().time().nodes(); ++k) {
    for (std::size_t comp = 0; comp < u.components(); ++comp) {
      const auto src = u.level(comp, k);
      auto dst = out.level(comp, k);
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] = factor * src[i];
    }
  }
  return out;
}

namespace {

// Phi inside the box, extended affinely (Phi(p) + x - p) outside.
void eval_phi(const VectorField& phi, double t, std::span<const double> x, std::span<double> out) {
  const double half = phi.grid().half_width();
  for (std::size_t c = 0; c < phi.components(); ++c) {
    const double p = std::clamp(x[c], -half, half);
    out[c] = phi.interpolate(c, t, x) + (x[c] - p);
  }
}

}  // namespace

void invert_phi(const VectorField& phi, double t, std::span<const double> y, std::span<double> x,
                double tol, std::size_t max_iter) {
  const std::size_t d = phi.components();
  std::copy(y.begin(), y.end(), x.begin());
  std::array<double, 2> value{};
  for (std::size_t it = 0; it < max_iter; ++it) {
    eval_phi(phi, t, x, std::span<double>(value.data(), d));
    double err = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      const double r = value[c] - y[c];
      err += r * r;
      x[c] -= r;
    }
    if (std::sqrt(err) <= tol) {
      return;
    }
  }
  throw NumericalError("invert_phi", "fixed-point iteration did not converge (gradient bound "
                                     "violated?) at t = " + std::to_string(t));
}

ZvonkinTransform::ZvonkinTransform(const VectorField& u, double c_b)
    : phi_(build_phi(u)), grad_(u.grid(), u.components() * u.components()), c_b_(c_b) {
  const PdeGrid& g = u.grid();
  const std::size_t d = g.dim();
  if (u.components() != d) throw std::invalid_argument("ZvonkinTransform: need d components");
  for (std::size_t k = 0; k < g.time().nodes(); ++k) {
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t a = 0; a < d; ++a) {
        auto dst = grad_.level(r * d + a, k);
        for (std::size_t node = 0; node < g.node_count(); ++node) {
          dst[node] = (r == a ? 1.0 : 0.0) + u.derivative(r, k, node, a);
        }
      }
    }
  }
}

void ZvonkinTransform::phi(double t, std::span<const double> x, std::span<double> out) const {
  eval_phi(phi_, t, x, out);
}

void ZvonkinTransform::psi(double t, std::span<const double> y, std::span<double> out,
                           double tol) const {
  invert_phi(phi_, t, y, out, tol);
}

void ZvonkinTransform::jacobian(double t, std::span<const double> x, std::span<double> out) const {
  for (std::size_t c = 0; c < grad_.components(); ++c) out[c] = grad_.interpolate(c, t, x);
}

bool ZvonkinTransform::inside(std::span<const double> x) const noexcept {
  const double half = phi_.grid().half_width();
  return std::all_of(x.begin(), x.end(), [half](double v) { return std::abs(v) <= half; });
}

BiLipschitzReport phi_bilipschitz_check(const ZvonkinTransform& transform, double c_b,
                                        std::size_t pairs, const NoiseSource& noise,
                                        double boundary_layer, double tolerance) {
  const PdeGrid& g = transform.phi_field().grid();
  const std::size_t d = g.dim();
  const double reach = g.half_width() - boundary_layer;
  if (!(reach > 0.0)) throw ConfigError("bi-Lipschitz check: boundary layer covers the box");
  BiLipschitzReport rep;
  rep.lower_bound = 1.0 / (1.0 + c_b);
  rep.upper_bound = (1.0 + 2.0 * c_b) / (1.0 + c_b);
  rep.min_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> uni(1 + 2 * d), x(d), y(d), px(d), py(d);
  for (std::size_t p = 0; p < pairs; ++p) {
    noise.uniforms(p * uni.size(), uni);
    const double t = uni[0] * g.time().horizon();
    const bool local = p % 2 == 1;
    for (std::size_t a = 0; a < d; ++a) {
      x[a] = -reach + 2.0 * reach * uni[1 + a];
      y[a] = local ? std::clamp(x[a] + (uni[1 + d + a] - 0.5) * 10.0 * g.step(), -reach, reach)
                   : -reach + 2.0 * reach * uni[1 + d + a];
    }
    double dist = 0.0;
    for (std::size_t a = 0; a < d; ++a) dist += (x[a] - y[a]) * (x[a] - y[a]);
    dist = std::sqrt(dist);
    if (dist < 1e-12) continue;
    transform.phi(t, x, px);
    transform.phi(t, y, py);
    double img = 0.0;
    for (std::size_t a = 0; a < d; ++a) img += (px[a] - py[a]) * (px[a] - py[a]);
    const double ratio = std::sqrt(img) / dist;
    ++rep.pairs;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio < rep.lower_bound - tolerance || ratio > rep.upper_bound + tolerance) {
      if (rep.violations++ == 0) {
        rep.first_violation = {t};
        rep.first_violation.insert(rep.first_violation.end(), x.begin(), x.end());
        rep.first_violation.insert(rep.first_violation.end(), y.begin(), y.end());
      }
    }
  }
  rep.pass = rep.violations == 0 && rep.pairs > 0;
  return rep;
}

TransformedDiffusion transformed_sigma(const DiffusionField& sigma,
                                       std::shared_ptr<const ZvonkinTransform> transform) {
  const std::size_t d = sigma.dim();
  if (transform->dim() != d) throw ConfigError("transformed_sigma: dimension mismatch");
  auto hits = std::make_shared<std::atomic<std::size_t>>(0);
  const double c_b = transform->c_b();
  const double bound = sigma.sup_bound() * (1.0 + 2.0 * c_b) / (1.0 + c_b);
  const double lambda = sigma.ellipticity() / (1.0 + c_b);
  DiffusionField field(
      d,
      [sigma, transform, hits, d](double t, std::span<const double> y, std::span<double> out) {
        std::array<double, 2> x{};
        std::array<double, 4> jac{}, s{};
        const std::span<double> xs(x.data(), d);
        transform->psi(t, y, xs);
        if (!transform->inside(xs)) hits->fetch_add(1, std::memory_order_relaxed);
        transform->jacobian(t, xs, std::span<double>(jac.data(), d * d));
        sigma(t, xs, std::span<double>(s.data(), d * d));
        linalg::matmul(std::span<const double>(jac.data(), d * d),
                       std::span<const double>(s.data(), d * d), d, out);
      },
      bound, lambda, "transformed");
  return {std::move(field), std::move(hits)};
}

TransformStats measure_transform(const ZvonkinTransform& transform, const DiffusionField& sigma,
                                 double boundary_layer) {
  const VectorField& phi = transform.phi_field();
  const PdeGrid& g = phi.grid();
  const std::size_t d = g.dim();
  TransformStats st;
  st.lip_phi = 0.0;
  double min_sv = std::numeric_limits<double>::infinity();
  std::vector<double> x(d), jac(d * d), s(d * d), prod(d * d);
  for (std::size_t k = 0; k < g.time().nodes(); ++k) {
    const double t = g.time().time(k);
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      if (!g.interior(node, boundary_layer)) continue;
      g.position(node, x);
      transform.jacobian(t, x, jac);
      sigma(t, x, s);
      linalg::matmul(jac, s, d, prod);
      st.sup_sigma_tilde = std::max(st.sup_sigma_tilde, linalg::spectral_norm(prod, d));
      st.lip_phi = std::max(st.lip_phi, linalg::spectral_norm(jac, d));
      min_sv = std::min(min_sv, linalg::smallest_singular_value(jac, d));
    }
  }
  if (!(min_sv > 0.0)) throw NumericalError("zvonkin", "Jacobian of Phi is singular on the grid");
  st.lip_psi = 1.0 / min_sv;
  return st;
}

// ---------------------------------------------------------------------------
// Martingale residual test
// ---------------------------------------------------------------------------

MartingaleReport driftless_residual_check(const SpaceTimeMap& phi, const DriftField& drift,
                                          const DiffusionField& diffusion,
                                          std::span<const double> x0, const TimeGrid& grid,
                                          const NoiseSource& noise,
                                          const MartingaleOptions& options) {
  const std::size_t d = x0.size();
  const std::size_t n = options.paths;
  const std::size_t blocks = std::clamp<std::size_t>(options.blocks, 1, grid.steps());
  if (n < 3) throw ConfigError("martingale test: need at least 3 paths");
  std::vector<std::size_t> cut(blocks + 1);
  for (std::size_t j = 0; j <= blocks; ++j) cut[j] = j * grid.steps() / blocks;

  // y[(path * (blocks + 1) + j) * d + c] = phi(t_cut[j], X_cut[j])_c
  std::vector<double> y(n * (blocks + 1) * d);
  const std::vector<double> start(x0.begin(), x0.end());
  parallel_for(n, options.workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> out(d);
    for (std::size_t p = begin; p < end; ++p) {
      const PathSample path = euler_maruyama(drift, diffusion, start, grid, noise.substream(p));
      for (std::size_t j = 0; j <= blocks; ++j) {
        phi(grid.time(cut[j]), path.at(cut[j]), out);
        std::copy(out.begin(), out.end(), y.begin() + static_cast<std::ptrdiff_t>(
                                                          (p * (blocks + 1) + j) * d));
      }
    }
  });

  MartingaleReport rep;
  rep.paths = n;
  rep.alpha = options.alpha;
  const double nn = static_cast<double>(n);
  std::size_t tests = 0;
  for (std::size_t j = 0; j < blocks; ++j) {
    for (std::size_t c = 0; c < d; ++c) {
      MartingaleBlock blk;
      blk.first_step = cut[j];
      blk.last_step = cut[j + 1];
      blk.component = c;
      RunningStats inc, lvl;
      for (std::size_t p = 0; p < n; ++p) {
        const double y0 = y[(p * (blocks + 1) + j) * d + c];
        const double y1 = y[(p * (blocks + 1) + j + 1) * d + c];
        inc.push(y1 - y0);
        lvl.push(y0);
      }
      const McEstimate m = inc.estimate();
      blk.mean = m.mean;
      blk.mean_stderr = m.stderr_;
      blk.p_mean = m.stderr_ > 0.0 ? two_sided_p(m.mean / m.stderr_) : (m.mean == 0.0 ? 1.0 : 0.0);
      ++tests;

      double sxx = 0.0, sxy = 0.0;
      for (std::size_t p = 0; p < n; ++p) {
        const double y0 = y[(p * (blocks + 1) + j) * d + c];
        const double dy = y[(p * (blocks + 1) + j + 1) * d + c] - y0;
        sxx += (y0 - lvl.mean()) * (y0 - lvl.mean());
        sxy += (y0 - lvl.mean()) * (dy - inc.mean());
      }
      if (sxx > 1e-12 * nn * (1.0 + lvl.mean() * lvl.mean())) {
        blk.slope = sxy / sxx;
        double rss = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
          const double y0 = y[(p * (blocks + 1) + j) * d + c];
          const double dy = y[(p * (blocks + 1) + j + 1) * d + c] - y0;
          const double e = (dy - inc.mean()) - blk.slope * (y0 - lvl.mean());
          rss += e * e;
        }
        blk.slope_stderr = std::sqrt(rss / (nn - 2.0) / sxx);
        blk.p_slope = two_sided_p(blk.slope / blk.slope_stderr);
        blk.slope_tested = true;
        ++tests;
      }
      rep.blocks.push_back(blk);
    }
  }
  rep.per_test_level = options.alpha / static_cast<double>(tests);
  rep.min_p = 1.0;
  for (const auto& b : rep.blocks) {
    rep.min_p = std::min(rep.min_p, b.p_mean);
    if (b.slope_tested) rep.min_p = std::min(rep.min_p, b.p_slope);
  }
  rep.pass = rep.min_p >= rep.per_test_level;
  return rep;
}

void export_field_csv(const VectorField& u, std::ostream& out, std::size_t level_stride) {
  const PdeGrid& g = u.grid();
  const std::size_t d = g.dim();
  level_stride = std::max<std::size_t>(1, level_stride);
  out << "t,x";
  if (d == 2) out << ",y";
  for (std::size_t c = 0; c < u.components(); ++c) out << ",u" << (c + 1);
  out << ",grad\n";
  std::vector<double> x(d);
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t k = 0; k < g.time().nodes(); k += level_stride) {
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      g.position(node, x);
      put(g.time().time(k));
      for (double v : x) {
        out << ',';
        put(v);
      }
      double grad = 0.0;
      for (std::size_t c = 0; c < u.components(); ++c) {
        out << ',';
        put(u.level(c, k)[node]);
        for (std::size_t a = 0; a < d; ++a) {
          const double v = u.derivative(c, k, node, a);
          grad += v * v;
        }
      }
      out << ',';
      put(std::sqrt(grad));
      out << '\n';
    }
  }
}

}  // namespace t2c
