#include "bayesmar/harness.hpp"
#include "bayesmar/mcmc.hpp"
#include "bayesmar/mle_fit.hpp"
#include "bayesmar/order_select.hpp"
#include "bayesmar/scoring.hpp"

#include <benchmark/benchmark.h>

using namespace bayesmar;

namespace {

TimeSeries design_series(std::size_t n) {
  return simulate_series(Coefficients{0.3, 0.75, -0.35}, ErrorFamily::laplace, n, 200, 42);
}

void BM_SolveL1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  const TimeSeries y = design_series(n);
  for (auto _ : state) benchmark::DoNotOptimize(fit_l1(y, p, static_cast<std::size_t>(p)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveL1)->ArgsProduct({{100, 200, 400, 800}, {2, 8}})->Unit(benchmark::kMicrosecond);

void BM_RunMh(benchmark::State& state) {
  const TimeSeries y = design_series(200);
  McmcConfig cfg;
  cfg.n_total = static_cast<std::size_t>(state.range(0));
  cfg.n_burn = cfg.n_total / 2;
  const auto family = state.range(1) ? ErrorFamily::laplace : ErrorFamily::gaussian;
  for (auto _ : state) benchmark::DoNotOptimize(run_mh(y, 2, family, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunMh)->ArgsProduct({{8000, 40000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_BuildEnsemble(benchmark::State& state) {
  const TimeSeries y = design_series(200);
  for (auto _ : state) benchmark::DoNotOptimize(build_ensemble(y, static_cast<int>(state.range(0)), ErrorFamily::laplace));
}
BENCHMARK(BM_BuildEnsemble)->Arg(8)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_CrpsSample(benchmark::State& state) {
  Rng rng(7);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (double& v : x) v = sample_laplace(rng, 0.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(crps_sample(x, 0.3));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CrpsSample)->RangeMultiplier(10)->Range(1000, 100000)->Complexity(benchmark::oNLogN);

}  // namespace

BENCHMARK_MAIN();
