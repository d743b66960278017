#include <benchmark/benchmark.h>

#include "fracstep/coefficients.hpp"
#include "fracstep/mittag_leffler.hpp"
#include "fracstep/solver.hpp"
#include "fracstep/stability.hpp"

namespace {

using namespace fracstep;

void BM_BuildTable(benchmark::State& state, FormulaFamily family) {
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_table(family, 0.5, count));
  state.SetComplexityN(state.range(0));
}
BENCHMARK_CAPTURE(BM_BuildTable, bdf1, FormulaFamily::bdf1)->RangeMultiplier(4)->Range(64, 16384)->Complexity();
BENCHMARK_CAPTURE(BM_BuildTable, bdf3, FormulaFamily::bdf3)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_MlEval(benchmark::State& state) {
  const double z = -static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ml_eval(0.5, z));
}
BENCHMARK(BM_MlEval)->Arg(1)->Arg(10)->Arg(100);

void BM_Run(benchmark::State& state) {
  ProblemSpec problem;
  problem.gamma = 0.5;
  problem.initial_condition = [](double x) { return x * (1.0 - x); };
  SchemeConfig config;
  config.lambda = 0.5;
  config.dx = 0.05;
  config.dt = time_step_for_ratio(1.0, config.dx, 1.0, problem.gamma);
  config.steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run(problem, config));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Run)->RangeMultiplier(2)->Range(256, 4096)->Complexity(benchmark::oNSquared);

void BM_Probe(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(probe_stability(FormulaFamily::bdf1, 0.5, 1.0, 0.33));
}
BENCHMARK(BM_Probe);

}  // namespace

BENCHMARK_MAIN();
