// SPDX-License-Identifier: MIT
// t2certify: command-line front end of the toolkit.
//
// Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 usage or config
// error, 3 numerical stage failure.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "t2certify/error.hpp"
#include "t2certify/harness.hpp"
#include "t2certify/models.hpp"
#include "t2certify/parallel.hpp"

namespace {

enum Exit : int { kPass = 0, kVerdictFail = 1, kUsage = 2, kNumerical = 3 };

struct Common {
  std::string config_path;
  std::string out;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_path, "experiment config file (key = value)");
  cmd->add_option("--seed", common.seed, "master seed (experiment.seed)");
  cmd->add_option("--out", common.out, "output directory (report.dir)");
  cmd->add_option("--override", common.overrides, "key=value, repeatable")
      ->expected(1, -1)
      ->take_all();
}

t2c::Config load(const Common& common) {
  t2c::Config cfg =
      common.config_path.empty() ? t2c::Config() : t2c::Config::parse_file(common.config_path);
  if (common.seed) cfg.set("experiment.seed", std::to_string(*common.seed));
  if (!common.out.empty()) cfg.set("report.dir", common.out);
  for (const auto& o : common.overrides) cfg.apply_override(o);
  return cfg;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int finish(const t2c::Report& report, const t2c::Config& cfg) {
  const std::string dir = cfg.get("report.dir");
  t2c::write_report(report, dir);
  std::printf("report written to %s (%s)\n", dir.c_str(), report.pass() ? "pass" : "fail");
  return report.pass() ? kPass : kVerdictFail;
}

int cmd_simulate(const t2c::Config& cfg, const t2c::RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto paths = t2c::run_simulate(cfg, opts);
  const std::string dir = cfg.get("report.dir");
  std::filesystem::create_directories(dir);
  t2c::write_paths_csv(paths, (std::filesystem::path(dir) / "paths.csv").string());
  t2c::Report report;
  report.config_echo = cfg.serialize();
  report.notes.push_back("simulated " + std::to_string(paths.size()) + " paths");
  report.wall_seconds = seconds_since(start);
  return finish(report, cfg);
}

int cmd_constant(const t2c::Config& cfg, const t2c::RunOptions& opts) {
  std::optional<t2c::ZvonkinDiagnostics> diag;
  const t2c::ConstantProvenance p = t2c::resolve_constant(cfg, opts, &diag);
  std::printf("source        %s\n", p.source.c_str());
  std::printf("C_star        %s\n", t2c::format_double(p.constant).c_str());
  std::printf("epsilon_star  %s\n", t2c::format_double(p.epsilon).c_str());
  std::printf("C_bdg         %s\n", cfg.get("constant.C_bdg").c_str());
  std::printf("driftless_C   %s%s\n", t2c::format_double(p.driftless.constant).c_str(),
              p.driftless.at_boundary ? "  (epsilon at window boundary)" : "");
  if (p.composed) {
    std::printf("psi_lip       %s\n", t2c::format_double(p.composed->psi_lip).c_str());
    std::printf("sigma_tilde_C %s%s\n", t2c::format_double(p.composed->base.constant).c_str(),
                p.composed->base.at_boundary ? "  (epsilon at window boundary)" : "");
  }
  return kPass;
}

int cmd_verify(const t2c::Config& cfg, const t2c::RunOptions& opts) {
  const t2c::Report report = t2c::run_verify_t2(cfg, opts);
  for (const auto& c : report.certificates) {
    std::printf("%-32s W2_emp^2=%-12.6g C*H=%-12.6g %s\n", c.experiment_id.c_str(),
                c.w2_emp.mean * c.w2_emp.mean, c.constant * c.entropy.mean,
                c.pass ? "pass" : "fail");
  }
  return finish(report, cfg);
}

int cmd_zvonkin(const t2c::Config& cfg, const t2c::RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  t2c::Report report;
  report.config_echo = cfg.serialize();
  report.zvonkin = t2c::run_zvonkin_diagnostics(cfg, opts);
  const auto& z = *report.zvonkin;
  std::printf("C_b %g after %zu round(s); sup|grad u| %.6g (bound %.6g)\n", z.c_b, z.rounds,
              z.gradient.sup_grad, z.gradient.bound);
  std::printf("residual %.3e on %zu nodes; bi-Lipschitz %s; round trip %.3e\n",
              z.residual.max_abs, z.residual.checked, z.bilipschitz.pass ? "pass" : "fail",
              z.roundtrip_max_error);
  std::printf("martingale min p %.3g, negative control %.3g, harmonic %.3g (level %.3g)\n",
              z.martingale.min_p, z.negative_control.min_p, z.harmonic.min_p,
              z.martingale.per_test_level);
  report.wall_seconds = seconds_since(start);
  return finish(report, cfg);
}

int cmd_concentration(const t2c::Config& cfg, const t2c::RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  t2c::Report report;
  report.config_echo = cfg.serialize();
  std::optional<t2c::ZvonkinDiagnostics> diag;
  const t2c::ConstantProvenance p = t2c::resolve_constant(cfg, opts, &diag);
  report.zvonkin = std::move(diag);
  report.concentration = t2c::run_concentration(
      cfg, t2c::PathFunctional::parse(cfg.get("concentration.functional")),
      cfg.get_list("concentration.r"), p.constant, opts);
  for (const auto& row : report.concentration->rows) {
    std::printf("r=%-6g tail=%-10.4g ci_hi=%-10.4g bound=%-10.4g %s\n", row.r,
                row.empirical_tail, row.ci_hi, row.bound, row.pass ? "pass" : "fail");
  }
  report.wall_seconds = seconds_since(start);
  return finish(report, cfg);
}

int cmd_particles(const t2c::Config& cfg, const t2c::RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  t2c::Report report;
  report.config_echo = cfg.serialize();
  report.mimicking = t2c::run_mimicking(cfg, opts);
  std::printf("regression error %.4g on %zu nodes; terminal KS %.4g\n",
              report.mimicking->max_recovery_error, report.mimicking->recovery_nodes,
              report.mimicking->ks_terminal);
  report.wall_seconds = seconds_since(start);
  return finish(report, cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"T2 transportation-inequality certification toolkit"};
  app.set_version_flag("--version", std::string(t2c::kToolkitVersion));
  app.require_subcommand(1);

  Common common;
  using Handler = int (*)(const t2c::Config&, const t2c::RunOptions&);
  const std::vector<std::tuple<const char*, const char*, Handler>> commands = {
      {"simulate", "simulate sample paths of the model", cmd_simulate},
      {"constant", "print the optimised T2 constant", cmd_constant},
      {"verify-t2", "certify W2^2 <= C H on tilted laws", cmd_verify},
      {"zvonkin", "solve the transform PDE and run its diagnostics", cmd_zvonkin},
      {"concentration", "compare empirical tails against exp(-r^2 / C)", cmd_concentration},
      {"particles", "random-drift vs mimicking SDE experiment", cmd_particles},
  };
  std::vector<std::pair<CLI::App*, Handler>> subs;
  for (const auto& [name, help, handler] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, common);
    subs.emplace_back(sub, handler);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  t2c::RunOptions opts;
  opts.workers = t2c::default_worker_count();
  try {
    const t2c::Config cfg = load(common);
    for (const auto& [sub, handler] : subs) {
      if (sub->parsed()) return handler(cfg, opts);
    }
    return kUsage;
  } catch (const t2c::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const t2c::NumericalError& e) {
    std::cerr << "numerical failure [" << e.stage() << "]: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
}
