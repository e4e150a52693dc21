#include <benchmark/benchmark.h>

#include <cmath>

#include "memsat/flow.hpp"
#include "memsat/gen.hpp"
#include "memsat/integrator.hpp"
#include "memsat/walksat.hpp"

namespace {

using namespace memsat;

PlantedInstance instance(std::int64_t n) {
  return generate_cdc({.n = static_cast<std::size_t>(n), .ratio = 4.3, .p0 = 0.08, .seed = 1});
}

void BM_FlowEvaluate(benchmark::State& state) {
  const auto inst = instance(state.range(0));
  const auto p = SolverParams::for_formula(inst.formula);
  RunConfig cfg;
  cfg.seed = 2;
  const auto s = init_state(inst.formula, p, cfg);
  const FlowField field(inst.formula, p);
  Derivative d;
  for (auto _ : state) {
    auto stats = field.evaluate(s, d);
    benchmark::DoNotOptimize(stats);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(inst.formula.num_clauses()));
}
BENCHMARK(BM_FlowEvaluate)->Arg(100)->Arg(400)->Arg(1600)->Arg(6400);

void BM_EulerSteps(benchmark::State& state) {
  const auto inst = instance(state.range(0));
  const auto p = SolverParams::for_formula(inst.formula);
  RunConfig cfg;
  cfg.seed = 3;
  const auto start = init_state(inst.formula, p, cfg);
  EulerIntegrator integ(inst.formula, p);
  auto s = start;
  for (auto _ : state) {
    // Restart well before the run could end in a solution.
    if (s.steps >= 500) {
      s = start;
      integ.invalidate();
    }
    benchmark::DoNotOptimize(integ.attempt(s));
  }
}
BENCHMARK(BM_EulerSteps)->Arg(100)->Arg(400)->Arg(1600);

void BM_WalkSatFlips(benchmark::State& state) {
  const auto inst = instance(state.range(0));
  std::uint64_t flips = 0;
  for (auto _ : state) {
    const auto rec = walksat_solve(inst.formula, {.noise = 0.5, .max_flips = 100'000, .seed = 4});
    flips += rec.steps;
    benchmark::DoNotOptimize(rec.solved);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(flips));
}
BENCHMARK(BM_WalkSatFlips)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_GenerateCdc(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto inst = generate_cdc({.n = static_cast<std::size_t>(state.range(0)), .ratio = 4.3, .p0 = 0.08, .seed = seed++});
    benchmark::DoNotOptimize(inst.formula.num_clauses());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(std::llround(4.3 * state.range(0))));
}
BENCHMARK(BM_GenerateCdc)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
