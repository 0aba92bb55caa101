#include <benchmark/benchmark.h>

#include <omp.h>

#include "dreg/scenarios.hpp"
#include "dreg/sweep.hpp"

using namespace dreg;

namespace {

Scenario bench_scenario(double t_end) {
    Scenario s = fhn_benchmark_scenario();
    s.integrator.t_end = t_end;
    s.integrator.stride = 10;
    return s;
}

void BM_SweepSerial(benchmark::State& state) {
    const Scenario s = bench_scenario(static_cast<double>(state.range(1)));
    const int count = static_cast<int>(state.range(0));
    for (auto _ : state) {
        SweepResult r = monte_carlo_serial(s, MuBox{}, count, 42);
        benchmark::DoNotOptimize(r.summary.worst_tail_error);
    }
    state.SetItemsProcessed(state.iterations() * count);
}

void BM_SweepOpenMP(benchmark::State& state) {
    const Scenario s = bench_scenario(static_cast<double>(state.range(1)));
    const int count = static_cast<int>(state.range(0));
    for (auto _ : state) {
        SweepResult r = monte_carlo(s, MuBox{}, count, 42);
        benchmark::DoNotOptimize(r.summary.worst_tail_error);
    }
    state.SetItemsProcessed(state.iterations() * count);
    state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

// args: sample count, horizon in seconds
BENCHMARK(BM_SweepSerial)->Args({8, 10})->Args({20, 60})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepOpenMP)->Args({8, 10})->Args({20, 60})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
