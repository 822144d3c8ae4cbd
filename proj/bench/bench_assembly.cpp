// Serial vs OpenMP-parallel assembly of (S_z, K_z) and of the direct solve.
// Run with OMP_NUM_THREADS set to the cores you want to compare.

#include <benchmark/benchmark.h>

#include "minnaert/scattering.hpp"

using namespace minnaert;

namespace {

void BM_layer_pair(benchmark::State& state) {
  const auto exec = state.range(1) ? Execution::Parallel : Execution::Serial;
  LayerAssembler as(make_icosphere(1.0, static_cast<int>(state.range(0))), exec);
  for (auto _ : state) {
    auto SK = as.layer_pair(cplx(0.09, 0.0));
    benchmark::DoNotOptimize(SK.first.matrix.data());
  }
  state.SetLabel(exec == Execution::Parallel ? "parallel" : "serial");
  state.counters["panels"] = static_cast<double>(as.size());
}

void BM_static_tables(benchmark::State& state) {
  const auto exec = state.range(1) ? Execution::Parallel : Execution::Serial;
  const auto mesh = make_icosphere(1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    LayerAssembler as(mesh, exec);
    benchmark::DoNotOptimize(as.static_single_layer().data());
    benchmark::DoNotOptimize(as.static_double_layer().data());
  }
  state.SetLabel(exec == Execution::Parallel ? "parallel" : "serial");
}

void BM_direct_solve(benchmark::State& state) {
  const auto exec = state.range(0) ? Execution::Parallel : Execution::Serial;
  auto as = std::make_shared<const LayerAssembler>(make_icosphere(1.0, 3), exec);
  auto p = ScatteringProblem::make(as, 0.05, 1.7);
  const auto pts = far_sample_points(p);
  for (auto _ : state) benchmark::DoNotOptimize(scattered_field_direct(p, pts).amplitude);
  state.SetLabel(exec == Execution::Parallel ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_layer_pair)->ArgsProduct({{2, 3}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_static_tables)->ArgsProduct({{2, 3}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_direct_solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(3);

BENCHMARK_MAIN();
