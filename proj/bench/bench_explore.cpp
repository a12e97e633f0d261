// Serial against OpenMP-parallel state-space construction.

#include <thread>

#include <benchmark/benchmark.h>

#include "awn/explore.hpp"

using namespace awn;

namespace {

void Explore(benchmark::State& state, const char* name) {
  Scenario scn = load_scenario(std::string(AWN_SOURCE_DIR "/scenarios/") + name + ".yaml");
  int workers = static_cast<int>(state.range(0));
  std::size_t states = 0;
  for (auto _ : state) {
    auto e = explore(scn, workers);
    states = e.built.lts.num_states;
    benchmark::DoNotOptimize(states);
  }
  state.counters["states"] = static_cast<double>(states);
  state.counters["states/s"] = benchmark::Counter(static_cast<double>(states), benchmark::Counter::kIsIterationInvariantRate);
}

void Workers(benchmark::internal::Benchmark* b) {
  int max = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  b->Arg(1)->Arg(2)->Arg(4);
  for (int w = 8; w < max; w *= 2) b->Arg(w);
  if (max > 4) b->Arg(max);
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK_CAPTURE(Explore, fig1, "fig1")->Apply(Workers);
BENCHMARK_CAPTURE(Explore, delivery_counterexample, "delivery_counterexample")->Apply(Workers)->Iterations(2);

BENCHMARK_MAIN();
