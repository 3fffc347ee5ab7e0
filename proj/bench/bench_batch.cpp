// Serial reference versus OpenMP replicate kernel on the baseline population.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "persist/batch.hpp"
#include "persist/search.hpp"

namespace {

using namespace persist;

void BM_BatchSerial(benchmark::State& state)
{
    const auto configs = replicate_configs(baseline_config(), 1, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_batch_serial(configs));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BatchParallel(benchmark::State& state)
{
    const auto configs = replicate_configs(baseline_config(), 1, static_cast<int>(state.range(0)));
    const int jobs = omp_get_max_threads();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_batch_parallel(configs, jobs));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = jobs;
}

void BM_SearchSerial(benchmark::State& state)
{
    SearchSpec spec;
    spec.num_searches = 4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_searches(spec, 1));
    }
}

void BM_SearchParallel(benchmark::State& state)
{
    SearchSpec spec;
    spec.num_searches = 4;
    const int jobs = omp_get_max_threads();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_searches(spec, jobs));
    }
    state.counters["threads"] = jobs;
}

}  // namespace

BENCHMARK(BM_BatchSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SearchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SearchParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
