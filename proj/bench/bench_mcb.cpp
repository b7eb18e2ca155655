#include <benchmark/benchmark.h>

#include "mcb/analysis.hpp"
#include "mcb/engine.hpp"
#include "mcb/lattice_dp.hpp"

using namespace mcb;

static void BM_BuildBoundaries(benchmark::State& state) {
  for (auto _ : state) {
    auto t = build_boundaries(0.01, SpendingSequence::standard(5e-4), state.range(0));
    benchmark::DoNotOptimize(t->row(t->size() - 1));
  }
}
BENCHMARK(BM_BuildBoundaries)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_EffortDp(benchmark::State& state) {
  const BucketSet j = bucket_set_jstar();
  const SimctestTables tables(j, SpendingSequence::standard(5e-4));
  const SimctestRule sim(j, tables);
  const RlRule rl(j, 1e-3);
  const StoppingRule& rule = state.range(0) == 0 ? static_cast<const StoppingRule&>(rl) : sim;
  effort_and_probs(0.0105, rule);  // warm the lazy tables
  for (auto _ : state) benchmark::DoNotOptimize(effort_and_probs(0.0105, rule).expected_effort);
}
BENCHMARK(BM_EffortDp)->Arg(0)->Arg(1)->ArgNames({"simctest"})->Unit(benchmark::kMillisecond);

static void BM_EngineRun(benchmark::State& state) {
  EngineOptions o;
  o.method = state.range(0) == 0 ? Method::rl : Method::simctest;
  const Engine engine(bucket_set_jstar(), o);
  std::uint64_t stream = 0;
  std::int64_t samples = 0;
  for (auto _ : state) {
    BernoulliStream s(0.03, 1, stream++);
    samples += engine.run(s).samples_used;
  }
  state.counters["samples/s"] = benchmark::Counter(static_cast<double>(samples), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_EngineRun)->Arg(0)->Arg(1)->ArgNames({"simctest"});

// Serial reference (0) against the OpenMP kernel (1).
static void BM_EffortCurve(benchmark::State& state) {
  const BucketSet j = bucket_set_jstar();
  const SimctestTables tables(j, SpendingSequence::standard(5e-4));
  const SimctestRule sim(j, tables);
  const RlRule rl(j, 1e-3);
  const auto grid = uniform_grid(16);
  effort_curve(grid, rl, sim, {}, false);
  for (auto _ : state) benchmark::DoNotOptimize(effort_curve(grid, rl, sim, {}, state.range(0) != 0));
}
BENCHMARK(BM_EffortCurve)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

static void BM_Screen(benchmark::State& state) {
  ScreenSpec spec;
  spec.hypotheses = 2000;
  spec.alternatives = 20;
  const BucketSet js = bucket_set_js();
  for (auto _ : state) {
    benchmark::DoNotOptimize(screen(spec, js, 1e-3, {10, 1.1}, 1, 100'000'000'000LL, state.range(0) != 0));
  }
}
BENCHMARK(BM_Screen)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
