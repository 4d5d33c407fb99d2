// SPDX-License-Identifier: MIT
#include "t2certify/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <utility>

#include "t2certify/error.hpp"
#include "t2certify/girsanov.hpp"
#include "t2certify/models.hpp"
#include "t2certify/noise.hpp"
#include "t2certify/parallel.hpp"
#include "t2certify/particles.hpp"
#include "t2certify/stats.hpp"
#include "t2certify/transport.hpp"

namespace t2c {
namespace {

// Stream ids per purpose, so that e.g. concentration paths never reuse the
// increments of the certificate batch.
constexpr std::uint64_t kStreamCertificate = 1;
constexpr std::uint64_t kStreamConcentration = 2;
constexpr std::uint64_t kStreamBiLipschitz = 3;
constexpr std::uint64_t kStreamMartingale = 4;
constexpr std::uint64_t kStreamSimulate = 5;
constexpr std::uint64_t kStreamRoundTrip = 6;
constexpr std::uint64_t kStreamRegression = 7;
constexpr std::uint64_t kStreamComparison = 8;

NoiseSource experiment_noise(const Config& config, const std::string& id, std::uint64_t purpose) {
  return NoiseSource(derive_seed(config.get_u64("experiment.seed"), id), purpose);
}

std::vector<std::string> tilt_kinds(const Config& config) {
  const std::string raw = config.get("tilt.kind");
  if (raw == "all") return {"constant", "time", "path"};
  std::vector<std::string> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw ConfigError("tilt.kind is empty");
  return out;
}

ConstantInputs constant_inputs(const Config& config, const ModelSpec& model) {
  ConstantInputs in;
  in.horizon = config.get_double("grid.T");
  const double declared = config.get_double("constant.sigma_sup");
  in.sigma_sup = declared > 0.0 ? declared : model.diffusion.sup_bound();
  in.c_bdg = config.get_double("constant.C_bdg");
  in.eps_min = config.get_double("constant.eps_min");
  in.validate();
  return in;
}

bool zvonkin_applies(const Config& config, const ModelSpec& model) {
  return config.get_bool("zvonkin.enabled") && !model.drift.is_zero() && model.dim <= 2;
}

std::string pass_word(bool pass) { return pass ? "pass" : "fail"; }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t derive_seed(std::uint64_t master, const std::string& experiment_id) {
  // FNV-1a over the id, then two rounds of mixing.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : experiment_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(master ^ mix64(h));
}

bool Report::pass() const {
  for (const auto& c : certificates) {
    if (!c.pass) return false;
  }
  if (concentration && !concentration->pass) return false;
  if (zvonkin && !zvonkin->pass) return false;
  if (mimicking && !mimicking->pass) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Zvonkin diagnostics
// ---------------------------------------------------------------------------

ZvonkinDiagnostics run_zvonkin_diagnostics(const Config& config, const RunOptions& options) {
  const ModelSpec model = build_model(config);
  if (model.dim > 2) throw ConfigError("zvonkin: the transform is solved for d <= 2 only");
  const double horizon = config.get_double("grid.T");
  const double h = config.get_double("zvonkin.h");
  std::size_t steps = config.get_size("zvonkin.steps");
  // Default dt = h / 10: the terminal layer of u is steep in time, and the
  // consistency residual is dominated by the time error at dt = h.
  if (steps == 0) steps = static_cast<std::size_t>(std::ceil(10.0 * horizon / h - 1e-9));
  const PdeGrid grid(model.dim, config.get_double("zvonkin.L"), h, TimeGrid(horizon, steps));

  ZvonkinConfig zc{model.drift, model.diffusion};
  zc.c_b = config.get_double("zvonkin.Cb");
  const std::string which = config.get("zvonkin.case");
  if (which == "bounded") {
    zc.theorem_case = TheoremCase::bounded_drift;
  } else if (which == "integrable") {
    zc.theorem_case = TheoremCase::integrable_drift;
  } else {
    throw ConfigError("zvonkin.case: expected 'bounded' or 'integrable'");
  }
  const double layer = config.get_double("zvonkin.boundary_layer");
  const double tol = 10.0 * h;

  ZvonkinDiagnostics diag;
  ControlledSolve solved = solve_with_gradient_control(zc, grid, tol, layer,
                                                       config.get_size("zvonkin.max_rounds"));
  diag.c_b = solved.c_b;
  diag.rounds = solved.rounds;
  diag.gradient = solved.gradient;
  zc.c_b = solved.c_b;
  diag.residual = pde_residual(
      solved.u, zc, {layer, config.get_double("zvonkin.terminal_fraction") * horizon});

  auto transform = std::make_shared<const ZvonkinTransform>(solved.u, solved.c_b);
  const std::string id = config.get("experiment.id");
  diag.bilipschitz =
      phi_bilipschitz_check(*transform, solved.c_b, config.get_size("zvonkin.pairs"),
                            experiment_noise(config, id, kStreamBiLipschitz), layer, tol);

  // Psi(Phi(x)) - x on random interior points.
  {
    const NoiseSource noise = experiment_noise(config, id, kStreamRoundTrip);
    const std::size_t d = model.dim;
    const double reach = grid.half_width() - layer;
    std::vector<double> uni(1 + d), x(d), y(d), back(d);
    for (std::size_t i = 0; i < 1000; ++i) {
      noise.uniforms(i * uni.size(), uni);
      const double t = uni[0] * horizon;
      for (std::size_t a = 0; a < d; ++a) x[a] = -reach + 2.0 * reach * uni[1 + a];
      transform->phi(t, x, y);
      transform->psi(t, y, back, 1e-13);
      double err = 0.0;
      for (std::size_t a = 0; a < d; ++a) err = std::max(err, std::abs(back[a] - x[a]));
      diag.roundtrip_max_error = std::max(diag.roundtrip_max_error, err);
    }
  }
  diag.stats = measure_transform(*transform, model.diffusion, layer);

  MartingaleOptions mo;
  mo.paths = config.get_size("zvonkin.martingale_N");
  mo.blocks = config.get_size("zvonkin.blocks");
  mo.alpha = config.get_double("zvonkin.alpha");
  mo.workers = options.workers;
  const TimeGrid sim_grid = build_grid(config);
  const NoiseSource mart_noise = experiment_noise(config, id, kStreamMartingale);
  diag.martingale = driftless_residual_check(
      [transform](double t, std::span<const double> x, std::span<double> out) {
        transform->phi(t, x, out);
      },
      model.drift, model.diffusion, model.x0, sim_grid, mart_noise, mo);
  diag.negative_control = driftless_residual_check(
      [](double, std::span<const double> x, std::span<double> out) {
        std::copy(x.begin(), x.end(), out.begin());
      },
      model.drift, model.diffusion, model.x0, sim_grid, mart_noise, mo);
  auto harmonic = std::make_shared<const ZvonkinTransform>(
      rescale(solved.u, 1.0 + solved.c_b), solved.c_b);
  diag.harmonic = driftless_residual_check(
      [harmonic](double t, std::span<const double> x, std::span<double> out) {
        harmonic->phi(t, x, out);
      },
      model.drift, model.diffusion, model.x0, sim_grid, mart_noise, mo);

  diag.pass = diag.gradient.pass && diag.bilipschitz.pass && diag.roundtrip_max_error <= 1e-8 &&
              diag.martingale.pass && !diag.negative_control.pass;
  return diag;
}

// ---------------------------------------------------------------------------
// Constants and certificates
// ---------------------------------------------------------------------------

ConstantProvenance resolve_constant(const Config& config, const RunOptions& options,
                                    std::optional<ZvonkinDiagnostics>* diagnostics) {
  const ModelSpec model = build_model(config);
  const ConstantInputs inputs = constant_inputs(config, model);
  ConstantProvenance prov;
  prov.driftless = optimize_epsilon(inputs);
  if (zvonkin_applies(config, model)) {
    ZvonkinDiagnostics diag = run_zvonkin_diagnostics(config, options);
    prov.composed = theorem_constant(inputs, diag.stats.lip_psi, diag.stats.sup_sigma_tilde);
    prov.source = "zvonkin";
    prov.constant = prov.composed->constant;
    prov.epsilon = prov.composed->base.epsilon;
    if (diagnostics) *diagnostics = std::move(diag);
  } else {
    prov.source = "driftless";
    prov.constant = prov.driftless.constant;
    prov.epsilon = prov.driftless.epsilon;
  }
  return prov;
}

T2Certificate run_certificate(const Config& config, const ConstantProvenance& provenance,
                              const RunOptions& options) {
  const ModelSpec model = build_model(config);
  const TimeGrid grid = build_grid(config);
  const TiltProcess tilt = build_tilt(config, model.dim, grid.horizon());
  const std::size_t n_paths = config.get_size("sample.N");
  const std::size_t batch = config.get_size("sample.B");
  const std::size_t rounds = config.get_size("sample.R");
  if (rounds < 2) throw ConfigError("sample.R must be >= 2");
  if (batch == 0 || batch > kDefaultAssignmentCap) {
    throw ConfigError("sample.B must be in [1, " + std::to_string(kDefaultAssignmentCap) + "]");
  }
  if (batch * rounds > n_paths) throw ConfigError("sample.B * sample.R exceeds sample.N");

  T2Certificate cert;
  cert.experiment_id = config.get("experiment.id") + "/" + config.get("tilt.kind");
  cert.model = model.name;
  cert.horizon = grid.horizon();
  cert.steps = grid.steps();
  cert.samples = n_paths;
  cert.constant = provenance.constant;
  cert.epsilon_star = provenance.epsilon;
  cert.c_bdg = config.get_double("constant.C_bdg");

  const NoiseSource noise = experiment_noise(config, cert.experiment_id, kStreamCertificate);
  const std::size_t kept = batch * rounds;
  std::vector<double> energy(n_paths), gap(n_paths);
  std::vector<PathSample> xs(kept, PathSample(grid, model.dim));
  std::vector<PathSample> ys(kept, PathSample(grid, model.dim));
  parallel_for(n_paths, options.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      CoupledPaths pair = girsanov_coupling(model.drift, model.diffusion, tilt, model.x0, grid,
                                            noise.substream(i));
      energy[i] = tilt_energy(pair);
      gap[i] = sup_gap_squared(pair);
      if (i < kept) {
        xs[i] = std::move(pair.x_path);
        ys[i] = std::move(pair.y_path);
      }
    }
  });
  cert.entropy = estimate_mean(energy);
  const McEstimate gap_sq = estimate_mean(gap);
  cert.w2_upper.count = gap_sq.count;
  cert.w2_upper.mean = std::sqrt(gap_sq.mean);
  cert.w2_upper.stderr_ = gap_sq.mean > 0.0 ? gap_sq.stderr_ / (2.0 * cert.w2_upper.mean) : 0.0;
  cert.w2_emp = batched_w2_estimate(xs, ys, batch, rounds, options.workers);
  decide(cert);
  return cert;
}

Report run_verify_t2(const Config& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.config_echo = config.serialize();
  std::optional<ZvonkinDiagnostics> diag;
  const ConstantProvenance prov = resolve_constant(config, options, &diag);
  report.zvonkin = std::move(diag);
  const ModelSpec model = build_model(config);
  if (!model.drift.is_zero() && prov.source == "driftless") {
    report.notes.push_back(
        "drift is nonzero but no transform was applied; the certificate uses the driftless "
        "constant with the model's sigma bound");
  }
  if (prov.composed) {
    report.notes.push_back("driftless constant for comparison: " +
                           format_double(prov.driftless.constant));
  }
  for (const std::string& kind : tilt_kinds(config)) {
    Config one = config;
    one.set("tilt.kind", kind);
    report.certificates.push_back(run_certificate(one, prov, options));
    report.provenance.push_back(prov);
  }
  report.notes.push_back(
      "w2_emp is computed between finite coupled batches and its bias relative to W2 of the "
      "laws is not controlled; the coupling bound w2_upper is reported alongside");
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------
// Concentration, simulation, mimicking
// ---------------------------------------------------------------------------

ConcentrationTable run_concentration(const Config& config, const PathFunctional& functional,
                                     const std::vector<double>& radii, double constant,
                                     const RunOptions& options) {
  if (!(constant > 0.0)) throw ConfigError("concentration: constant must be > 0");
  const ModelSpec model = build_model(config);
  const TimeGrid grid = build_grid(config);
  const std::size_t n = config.get_size("concentration.N");
  if (n == 0) throw ConfigError("concentration.N must be >= 1");
  if (functional.kind != FunctionalKind::sup_norm && functional.coordinate >= model.dim) {
    throw ConfigError("concentration.functional: coordinate out of range");
  }
  const NoiseSource noise =
      experiment_noise(config, config.get("experiment.id"), kStreamConcentration);
  std::vector<double> f(n);
  parallel_for(n, options.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const PathSample path =
          euler_maruyama(model.drift, model.diffusion, model.x0, grid, noise.substream(i));
      f[i] = lipschitz_functional_eval(functional, path);
    }
  });
  ConcentrationTable table;
  table.functional = functional.tag();
  table.samples = n;
  table.constant = constant;
  table.mean = estimate_mean(f).mean;
  table.pass = true;
  for (double r : radii) {
    ConcentrationRow row;
    row.r = r;
    const auto hits = static_cast<std::size_t>(
        std::count_if(f.begin(), f.end(), [&](double v) { return v - table.mean >= r; }));
    row.empirical_tail = static_cast<double>(hits) / static_cast<double>(n);
    const Interval ci = wilson_interval(hits, n, 0.99);
    row.ci_lo = ci.lo;
    row.ci_hi = ci.hi;
    row.bound = std::exp(-r * r / constant);
    // A violation needs the whole interval above the bound.
    row.pass = row.ci_lo <= row.bound;
    table.pass = table.pass && row.pass;
    table.rows.push_back(row);
  }
  return table;
}

std::vector<PathSample> run_simulate(const Config& config, const RunOptions& options) {
  const ModelSpec model = build_model(config);
  const TimeGrid grid = build_grid(config);
  const std::size_t n = config.get_size("report.paths");
  const NoiseSource noise = experiment_noise(config, config.get("experiment.id"), kStreamSimulate);
  std::vector<PathSample> out(n, PathSample(grid, model.dim));
  parallel_for(n, options.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = euler_maruyama(model.drift, model.diffusion, model.x0, grid, noise.substream(i));
    }
  });
  return out;
}

MimickingResult run_mimicking(const Config& config, const RunOptions& options) {
  const ModelSpec model = build_model(config);
  if (model.dim != 1) throw ConfigError("mimicking experiment is one-dimensional (model.dim = 1)");
  const double horizon = config.get_double("grid.T");
  const TimeGrid grid(horizon, config.get_size("mimic.steps"));
  const std::size_t samples = config.get_size("mimic.samples");
  const std::size_t paths = config.get_size("mimic.paths");
  if (samples == 0 || paths == 0) throw ConfigError("mimic.samples and mimic.paths must be >= 1");
  const std::string id = config.get("experiment.id");
  const DriftField random_drift = DriftField::sign(1);
  const double x0 = model.x0[0];

  // Stage 1: (X(t_k), g(t_k)) for every step, g(t) = sgn(X(t)).
  const std::size_t n = grid.steps();
  std::vector<double> xs(n * samples), gs(n * samples);
  const NoiseSource reg_noise = experiment_noise(config, id, kStreamRegression);
  parallel_for(samples, options.workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> g(1);
    for (std::size_t i = begin; i < end; ++i) {
      const PathSample p = euler_maruyama(random_drift, model.diffusion, std::vector<double>{x0},
                                          grid, reg_noise.substream(i));
      for (std::size_t k = 0; k < n; ++k) {
        random_drift(grid.time(k), p.at(k), g);
        xs[k * samples + i] = p.at(k)[0];
        gs[k * samples + i] = g[0];
      }
    }
  });
  std::vector<RegressionSlice> slices(n);
  for (std::size_t k = 0; k < n; ++k) {
    slices[k].t = grid.time(k);
    slices[k].x.assign(xs.begin() + static_cast<std::ptrdiff_t>(k * samples),
                       xs.begin() + static_cast<std::ptrdiff_t>((k + 1) * samples));
    slices[k].g.assign(gs.begin() + static_cast<std::ptrdiff_t>(k * samples),
                       gs.begin() + static_cast<std::ptrdiff_t>((k + 1) * samples));
  }
  xs.clear();
  gs.clear();
  ConditionalDriftOptions opts;
  opts.bandwidth = config.get_double("mimic.bandwidth");
  opts.g_sup = 1.0;
  const ConditionalDrift est = conditional_drift_estimate(slices, opts);
  slices.clear();

  MimickingResult res;
  res.bandwidth = opts.bandwidth;
  res.regression_samples = samples;
  res.comparison_paths = paths;
  for (std::size_t s = 1; s < est.slices(); ++s) {
    for (std::size_t j = 0; j < est.nodes(); ++j) {
      const double x = est.node(j);
      if (!est.supported(s, j) || std::abs(x) < 3.0 * opts.bandwidth) continue;
      res.max_recovery_error =
          std::max(res.max_recovery_error, std::abs(est.value(s, j) - (x > 0 ? 1.0 : -1.0)));
      ++res.recovery_nodes;
    }
  }
  for (std::size_t j = 0; j < est.nodes(); ++j) {
    res.grid_x.push_back(est.node(j));
    res.final_slice.push_back(est.value(est.slices() - 1, j));
  }

  // Stage 2: both dynamics on shared increments, compare terminal laws.
  const DriftField mimic = est.as_drift_field();
  const NoiseSource cmp_noise = experiment_noise(config, id, kStreamComparison);
  std::vector<double> a(paths), b(paths);
  parallel_for(paths, options.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::vector<double> inc = brownian_increments(cmp_noise.substream(i), grid, 1);
      a[i] = euler_maruyama(random_drift, model.diffusion, std::vector<double>{x0}, grid, inc)
                 .at(n)[0];
      b[i] = euler_maruyama(mimic, model.diffusion, std::vector<double>{x0}, grid, inc).at(n)[0];
    }
  });
  res.ks_terminal = ks_distance(a, b);
  res.pass = res.recovery_nodes > 0 && res.max_recovery_error <= 0.1 && res.ks_terminal <= 0.02;
  return res;
}

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

void write_certificates_csv(const std::vector<T2Certificate>& certs, const std::string& path) {
  auto out = open_out(path);
  out << "experiment_id,model,T,n_steps,N,C,epsilon_star,C_bdg,H,H_stderr,w2_upper,"
         "w2_upper_stderr,w2_emp,w2_emp_stderr,slack_ratio,verdict\n";
  for (const auto& c : certs) {
    out << c.experiment_id << ',' << c.model << ',' << format_double(c.horizon) << ','
        << c.steps << ',' << c.samples << ',' << format_double(c.constant) << ','
        << format_double(c.epsilon_star) << ',' << format_double(c.c_bdg) << ','
        << format_double(c.entropy.mean) << ',' << format_double(c.entropy.stderr_) << ','
        << format_double(c.w2_upper.mean) << ',' << format_double(c.w2_upper.stderr_) << ','
        << format_double(c.w2_emp.mean) << ',' << format_double(c.w2_emp.stderr_) << ','
        << format_double(c.slack_ratio) << ',' << pass_word(c.pass) << '\n';
  }
}

void write_concentration_csv(const ConcentrationTable& table, const std::string& path) {
  auto out = open_out(path);
  out << "r,empirical_tail,ci_hi,bound,pass\n";
  for (const auto& row : table.rows) {
    out << format_double(row.r) << ',' << format_double(row.empirical_tail) << ','
        << format_double(row.ci_hi) << ',' << format_double(row.bound) << ','
        << pass_word(row.pass) << '\n';
  }
}

void write_zvonkin_csv(const ZvonkinDiagnostics& d, const std::string& path) {
  auto out = open_out(path);
  out << "check,value,bound,pass\n";
  auto row = [&](const char* name, double value, double bound, const std::string& verdict) {
    out << name << ',' << format_double(value) << ',' << format_double(bound) << ',' << verdict
        << '\n';
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row("c_b", d.c_b, nan, "-");
  row("rounds", static_cast<double>(d.rounds), nan, "-");
  row("sup_grad", d.gradient.sup_grad, d.gradient.bound, pass_word(d.gradient.pass));
  row("pde_residual", d.residual.max_abs, nan, "-");
  row("bilipschitz_min_ratio", d.bilipschitz.min_ratio, d.bilipschitz.lower_bound,
      pass_word(d.bilipschitz.pass));
  row("bilipschitz_max_ratio", d.bilipschitz.max_ratio, d.bilipschitz.upper_bound,
      pass_word(d.bilipschitz.pass));
  row("roundtrip_error", d.roundtrip_max_error, 1e-8, pass_word(d.roundtrip_max_error <= 1e-8));
  row("lip_phi", d.stats.lip_phi, nan, "-");
  row("lip_psi", d.stats.lip_psi, nan, "-");
  row("sup_sigma_tilde", d.stats.sup_sigma_tilde, nan, "-");
  row("martingale_min_p", d.martingale.min_p, d.martingale.per_test_level,
      pass_word(d.martingale.pass));
  row("negative_control_min_p", d.negative_control.min_p, d.negative_control.per_test_level,
      d.negative_control.pass ? "fail" : "pass");
  row("harmonic_min_p", d.harmonic.min_p, d.harmonic.per_test_level, pass_word(d.harmonic.pass));
}

void write_paths_csv(const std::vector<PathSample>& paths, const std::string& path) {
  auto out = open_out(path);
  const std::size_t d = paths.empty() ? 1 : paths.front().dim();
  out << "path,t";
  for (std::size_t i = 0; i < d; ++i) out << ",x" << (i + 1);
  out << '\n';
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const TimeGrid& g = paths[p].grid();
    for (std::size_t k = 0; k < g.nodes(); ++k) {
      out << p << ',' << format_double(g.time(k));
      for (double v : paths[p].at(k)) out << ',' << format_double(v);
      out << '\n';
    }
  }
}

void write_mimicking_csv(const MimickingResult& result, const std::string& path) {
  auto out = open_out(path);
  out << "x,b_hat_final\n";
  for (std::size_t j = 0; j < result.grid_x.size(); ++j) {
    out << format_double(result.grid_x[j]) << ',' << format_double(result.final_slice[j]) << '\n';
  }
}

void write_report(const Report& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  if (!report.certificates.empty()) {
    write_certificates_csv(report.certificates, (root / "certificates.csv").string());
  }
  if (report.concentration) {
    write_concentration_csv(*report.concentration, (root / "concentration.csv").string());
  }
  if (report.zvonkin) write_zvonkin_csv(*report.zvonkin, (root / "zvonkin.csv").string());
  if (report.mimicking) write_mimicking_csv(*report.mimicking, (root / "mimicking.csv").string());
  {
    auto out = open_out((root / "config.cfg").string());
    out << report.config_echo;
  }
  auto out = open_out((root / "summary.txt").string());
  out << "t2certify " << report.version << '\n';
  out << "wall_seconds " << format_double(report.wall_seconds) << '\n';
  for (std::size_t i = 0; i < report.certificates.size(); ++i) {
    const auto& c = report.certificates[i];
    out << "certificate " << c.experiment_id << " model=" << c.model
        << " W2_emp^2=" << format_double(c.w2_emp.mean * c.w2_emp.mean)
        << " C*H=" << format_double(c.constant * c.entropy.mean) << " verdict=" << pass_word(c.pass);
    if (i < report.provenance.size()) {
      const auto& p = report.provenance[i];
      out << " constant_source=" << p.source;
      if (p.driftless.at_boundary) out << " epsilon_at_boundary";
    }
    out << '\n';
  }
  if (report.concentration) {
    out << "concentration " << report.concentration->functional
        << " N=" << report.concentration->samples
        << " C=" << format_double(report.concentration->constant)
        << " verdict=" << pass_word(report.concentration->pass) << '\n';
  }
  if (report.zvonkin) {
    const auto& z = *report.zvonkin;
    out << "zvonkin C_b=" << format_double(z.c_b) << " sup_grad=" << format_double(z.gradient.sup_grad)
        << " bilipschitz=" << pass_word(z.bilipschitz.pass)
        << " martingale_min_p=" << format_double(z.martingale.min_p)
        << " negative_control_min_p=" << format_double(z.negative_control.min_p)
        << " harmonic_min_p=" << format_double(z.harmonic.min_p)
        << " verdict=" << pass_word(z.pass) << '\n';
  }
  if (report.mimicking) {
    out << "mimicking recovery_error=" << format_double(report.mimicking->max_recovery_error)
        << " ks=" << format_double(report.mimicking->ks_terminal)
        << " verdict=" << pass_word(report.mimicking->pass) << '\n';
  }
  for (const auto& note : report.notes) out << "note " << note << '\n';
  out << "overall " << pass_word(report.pass()) << '\n';
}

}  // namespace t2c
