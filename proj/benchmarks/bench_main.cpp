// SPDX-License-Identifier: MIT
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "t2certify/girsanov.hpp"
#include "t2certify/noise.hpp"
#include "t2certify/particles.hpp"
#include "t2certify/sde.hpp"
#include "t2certify/transport.hpp"
#include "t2certify/zvonkin.hpp"

using namespace t2c;

static void BM_PhiloxNormals(benchmark::State& state) {
  const NoiseSource noise(1, 2);
  std::vector<double> out(static_cast<std::size_t>(state.range(0)));
  std::uint64_t first = 0;
  for (auto _ : state) {
    noise.standard_normals(first, out);
    first += out.size();
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PhiloxNormals)->Arg(1 << 10)->Arg(1 << 16);

static void BM_EulerSign(benchmark::State& state) {
  const TimeGrid grid(1.0, static_cast<std::size_t>(state.range(0)));
  const auto drift = DriftField::sign(1);
  const auto sigma = DiffusionField::identity(1);
  const std::vector<double> x0{0.0};
  std::uint64_t path = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(euler_maruyama(drift, sigma, x0, grid, NoiseSource(3, path++)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EulerSign)->Arg(1000);

static void BM_CoupledRankModel(benchmark::State& state) {
  RankModelSpec spec;
  spec.particles = 5;
  spec.deltas = {1.0, 0.5, 0.0, -0.5, -1.0};
  spec.sigma = [](std::size_t, double) { return 1.0; };
  const auto drift = make_rank_drift(spec);
  const auto sigma = make_particle_diffusion(spec);
  const auto tilt = TiltProcess::lagged_tanh(std::vector<double>(5, 1.0));
  const TimeGrid grid(1.0, 1000);
  const std::vector<double> x0{-1, -0.5, 0, 0.5, 1};
  std::uint64_t path = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(girsanov_coupling(drift, sigma, tilt, x0, grid, NoiseSource(4, path++)));
  }
}
BENCHMARK(BM_CoupledRankModel);

static void BM_EmpiricalW2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const TimeGrid grid(1.0, 100);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  auto make = [&] {
    std::vector<PathSample> out;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> v(grid.nodes());
      for (double& x : v) x = normal(rng);
      out.emplace_back(grid, 1, std::move(v));
    }
    return out;
  };
  const auto mu = make();
  const auto nu = make();
  for (auto _ : state) benchmark::DoNotOptimize(empirical_w2(mu, nu));
}
BENCHMARK(BM_EmpiricalW2)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_ZvonkinSolve1D(benchmark::State& state) {
  const double h = 0.01;
  const PdeGrid grid(1, 6.0, h, TimeGrid(0.5, 500));
  ZvonkinConfig cfg{DriftField::sign(1), DiffusionField::identity(1)};
  cfg.c_b = 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(zvonkin_solve(cfg, grid));
}
BENCHMARK(BM_ZvonkinSolve1D)->Unit(benchmark::kMillisecond);

static void BM_ZvonkinSolve2D(benchmark::State& state) {
  const PdeGrid grid(2, 2.0, 0.05, TimeGrid(0.25, 50));
  ZvonkinConfig cfg{DriftField::sign(2), DiffusionField::constant(2, {1.0, 0.0, 0.3, 1.0})};
  cfg.c_b = 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(zvonkin_solve(cfg, grid));
}
BENCHMARK(BM_ZvonkinSolve2D)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
