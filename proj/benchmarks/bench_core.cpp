// Microbenchmarks for the hot paths: the one-time eigensolve, heat/fractional
// applies through the basis, a Newton step, and the Green-profile assembly.

#include <benchmark/benchmark.h>

#include "fpme/green.hpp"
#include "fpme/semigroup.hpp"

namespace {

using namespace fpme;

ModelManifold make_manifold() { return ModelManifold(3, Warping::euclidean()); }

void BM_eigensolve(benchmark::State& state) {
  ModelManifold manifold = make_manifold();
  RadialGrid grid = build_grid(manifold, 20.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    SpectralDecomposition decomposition(grid, manifold);
    benchmark::DoNotOptimize(decomposition.eigenvalues());
  }
}
BENCHMARK(BM_eigensolve)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_heat_apply(benchmark::State& state) {
  ModelManifold manifold = make_manifold();
  RadialGrid grid = build_grid(manifold, 20.0, static_cast<int>(state.range(0)));
  SpectralDecomposition decomposition(grid, manifold);
  Vector u = ball_indicator(manifold, grid, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(decomposition.apply_heat(u, 0.5));
}
BENCHMARK(BM_heat_apply)->Arg(512)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_newton_step(benchmark::State& state) {
  ModelManifold manifold = make_manifold();
  RadialGrid grid = build_grid(manifold, 20.0, static_cast<int>(state.range(0)));
  SpectralDecomposition decomposition(grid, manifold);
  FractionalOperator op(decomposition, 0.5);
  op.dense_power();  // exclude the lazy build from the timing
  Vector u = ball_indicator(manifold, grid, 1.0);
  SolverConfig cfg;
  cfg.time_grid = {1e-3};
  for (auto _ : state)
    benchmark::DoNotOptimize(implicit_euler_step(op, 2.0, 1e-3, u, cfg));
}
BENCHMARK(BM_newton_step)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_green_profile(benchmark::State& state) {
  ModelManifold manifold = make_manifold();
  RadialGrid grid = build_grid(manifold, 20.0, static_cast<int>(state.range(0)));
  SpectralDecomposition decomposition(grid, manifold);
  FractionalOperator op(decomposition, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(green_function(op));
}
BENCHMARK(BM_green_profile)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
