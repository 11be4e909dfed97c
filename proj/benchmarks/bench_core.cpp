#include <benchmark/benchmark.h>

#include "sdct/sdct.hpp"

using namespace sdct;

namespace {

DataMatrix orthogonal_data(int n, int p, double theta, std::uint64_t seed) {
  return synthesize(make_orthogonal_dictionary(n, seed), sample_bg(n, p, theta, seed + 1));
}

void BM_ObjectiveValueGradHess(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int workers = static_cast<int>(state.range(1));
  const auto y = orthogonal_data(n, 5 * n * n * n, 0.2, 1);
  const SphereObjective obj(y.entries, SmoothingParams(0.01), workers);
  const Vector q = SpherePoint::random(n, 2).vector();
  for (auto _ : state) benchmark::DoNotOptimize(obj.value_grad_hess(q));
  state.SetItemsProcessed(state.iterations() * y.samples());
}
BENCHMARK(BM_ObjectiveValueGradHess)->Args({10, 1})->Args({20, 1})->Args({20, 4})->Unit(benchmark::kMicrosecond);

void BM_Subproblem(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Rng rng(3);
  Matrix a(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) a(i, j) = rng.normal();
  Vector g(m);
  for (int i = 0; i < m; ++i) g(i) = rng.normal();
  const TrSubproblem sp{0.5 * (a + a.transpose()), g, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(solve_subproblem(sp));
}
BENCHMARK(BM_Subproblem)->Arg(5)->Arg(9)->Arg(29)->Unit(benchmark::kMicrosecond);

void BM_LpRounding(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto y = orthogonal_data(n, 5 * n * n * n, 0.15, 4);
  const Vector target = y.dictionary->entries.col(0);
  Vector r = target + 0.05 * SpherePoint::random(n, 5).vector();
  for (auto _ : state) benchmark::DoNotOptimize(lp_round(RoundingProblem(y.entries, r)));
}
BENCHMARK(BM_LpRounding)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_TrmMinimize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto y = orthogonal_data(n, 5 * n * n * n, 0.2, 6);
  const auto q0 = SpherePoint::random(n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(minimize(y, SmoothingParams(0.01), TrmConfig{}, q0));
}
BENCHMARK(BM_TrmMinimize)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto y = orthogonal_data(n, 5 * n * n * n, 0.15, 8);
  PipelineConfig cfg;
  cfg.precondition = false;
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(y, cfg));
}
BENCHMARK(BM_Pipeline)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
