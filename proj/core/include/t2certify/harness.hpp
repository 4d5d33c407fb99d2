// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "t2certify/certificate.hpp"
#include "t2certify/config.hpp"
#include "t2certify/constants.hpp"
#include "t2certify/sde.hpp"
#include "t2certify/zvonkin.hpp"

namespace t2c {

inline constexpr const char* kToolkitVersion = "0.3.0";

struct RunOptions {
  std::size_t workers = 1;
};

// Where the certificate's constant came from.
struct ConstantProvenance {
  std::string source;  // "driftless" (no transform) or "zvonkin"
  EpsilonOptimum driftless;     // constant with sigma_sup of the model
  std::optional<TheoremConstant> composed;  // zvonkin mode only
  double constant = 0.0;
  double epsilon = 0.5;
};

struct ConcentrationRow {
  double r = 0.0;
  double empirical_tail = 0.0;
  double ci_hi = 0.0;
  double ci_lo = 0.0;
  double bound = 0.0;  // exp(-r^2 / C)
  bool pass = false;
};

struct ConcentrationTable {
  std::string functional;
  std::size_t samples = 0;
  double constant = 0.0;
  double mean = 0.0;
  std::vector<ConcentrationRow> rows;
  bool pass = false;
};

struct ZvonkinDiagnostics {
  double c_b = 0.0;
  std::size_t rounds = 0;
  GradientCheck gradient;
  ResidualReport residual;
  BiLipschitzReport bilipschitz;
  double roundtrip_max_error = 0.0;
  TransformStats stats;
  MartingaleReport martingale;        // Y = Phi(t, X)
  MartingaleReport negative_control;  // Y = X (must fail for a drifted model)
  MartingaleReport harmonic;          // Y = X + (1 + C_b) u, supplementary
  bool pass = false;                  // gradient, bi-Lipschitz, round trip, martingale
};

// Mimicking experiment: a process driven by the random drift
// g(t) = sgn(X(t)) against the Markov SDE with the regressed drift
// E[g(t) | X(t) = x], sharing Brownian increments.
struct MimickingResult {
  double bandwidth = 0.0;
  std::size_t regression_samples = 0;
  std::size_t comparison_paths = 0;
  double max_recovery_error = 0.0;  // |b_hat - sgn| at supported |x| >= 3 bandwidths
  std::size_t recovery_nodes = 0;
  double ks_terminal = 0.0;
  bool pass = false;  // recovery <= 0.1 and KS <= 0.02
  std::vector<double> grid_x;       // nodes of the estimate
  std::vector<double> final_slice;  // b_hat on the last slice
};

struct Report {
  std::string config_echo;
  std::string version = kToolkitVersion;
  std::vector<T2Certificate> certificates;
  std::vector<ConstantProvenance> provenance;  // parallel to certificates
  std::optional<ConcentrationTable> concentration;
  std::optional<ZvonkinDiagnostics> zvonkin;
  std::optional<MimickingResult> mimicking;
  std::vector<std::string> notes;
  double wall_seconds = 0.0;

  bool pass() const;
};

// Chooses the constant for the configured model: the transformed constant
// when zvonkin.enabled, the drift is nonzero and d <= 2; otherwise the
// driftless constant with the model's sigma bound.
ConstantProvenance resolve_constant(const Config& config, const RunOptions& options,
                                    std::optional<ZvonkinDiagnostics>* diagnostics = nullptr);

// Seed of an experiment: a hash of the id mixed into the master seed.
std::uint64_t derive_seed(std::uint64_t master, const std::string& experiment_id);

// One certificate for the configured model and tilt with a given constant.
T2Certificate run_certificate(const Config& config, const ConstantProvenance& provenance,
                              const RunOptions& options);

// Constant -> coupled batch -> entropy, coupling bound, empirical W_2 -> verdict.
Report run_verify_t2(const Config& config, const RunOptions& options);

// Empirical tails of f - E f against exp(-r^2 / C) for each r.
ConcentrationTable run_concentration(const Config& config, const PathFunctional& functional,
                                     const std::vector<double>& radii, double constant,
                                     const RunOptions& options);

// report.paths sample paths of the model (no tilt).
std::vector<PathSample> run_simulate(const Config& config, const RunOptions& options);

MimickingResult run_mimicking(const Config& config, const RunOptions& options);

// Solve -> gradient control -> residual -> bi-Lipschitz -> round trip ->
// martingale residual test (with negative control).
ZvonkinDiagnostics run_zvonkin_diagnostics(const Config& config, const RunOptions& options);

// CSV writers with fixed headers.
void write_certificates_csv(const std::vector<T2Certificate>& certs, const std::string& path);
void write_concentration_csv(const ConcentrationTable& table, const std::string& path);
void write_zvonkin_csv(const ZvonkinDiagnostics& diag, const std::string& path);
void write_paths_csv(const std::vector<PathSample>& paths, const std::string& path);
void write_mimicking_csv(const MimickingResult& result, const std::string& path);
// certificates.csv, concentration.csv, zvonkin.csv, mimicking.csv (when present),
// config.cfg and summary.txt under `dir`.
void write_report(const Report& report, const std::string& dir);

std::string format_double(double v);  // %.17g, "inf"/"nan" spelled out

}  // namespace t2c
