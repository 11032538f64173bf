/*
   Copyright 2026 The pcas Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Serial reference kernels against their OpenMP counterparts: the F(n)
// mode series and the Monte Carlo flux accumulation.
//
//   ./bench_kernels --benchmark_counters_tabular=true
//
// The thread count argument is the OpenMP worker count; on a single-core
// machine the parallel variants only measure scheduling overhead.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "pcas/casimir.hpp"
#include "pcas/mcsim.hpp"

namespace {

using namespace pcas;

const quad::FReduced& series_kernel()
{
    static const quad::FReduced fr{quad::ScaledCutoff{cutoff::exponential(20.0, cutoff::Basis::reduced), 1.0L},
                                   quad::Strategy::reduced_y};
    return fr;
}

kernels::SeriesPolicy series_policy()
{
    kernels::SeriesPolicy p;
    p.abs_tol = 1e-12;
    return p;
}

void BM_SeriesSerial(benchmark::State& state)
{
    const quad::QuadratureConfig cfg;
    auto term = [&](std::size_t n) { return quad::F_eval(static_cast<long double>(n), series_kernel(), cfg); };
    for (auto _ : state) benchmark::DoNotOptimize(kernels::series_sum_serial(term, series_policy()).sum);
}

void BM_SeriesParallel(benchmark::State& state)
{
    const quad::QuadratureConfig cfg;
    const int workers = static_cast<int>(state.range(0));
    auto term = [&](std::size_t n) { return quad::F_eval(static_cast<long double>(n), series_kernel(), cfg); };
    for (auto _ : state) benchmark::DoNotOptimize(kernels::series_sum(term, series_policy(), workers).sum);
}

constexpr std::uint64_t mc_samples = 1 << 18;

void BM_FluxSerial(benchmark::State& state)
{
    const auto spec = cutoff::exponential(1.0);
    auto w = [&](std::uint64_t i) { return mcsim::flux_weight(i, 42, spec, 1.0); };
    for (auto _ : state) benchmark::DoNotOptimize(kernels::accumulate_serial(w, mc_samples).sum);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * mc_samples));
}

void BM_FluxParallel(benchmark::State& state)
{
    const auto spec = cutoff::exponential(1.0);
    const int workers = static_cast<int>(state.range(0));
    auto w = [&](std::uint64_t i) { return mcsim::flux_weight(i, 42, spec, 1.0); };
    for (auto _ : state) benchmark::DoNotOptimize(kernels::accumulate(w, mc_samples, workers).sum);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * mc_samples));
}

void thread_counts(benchmark::internal::Benchmark* b)
{
    const int max = omp_get_num_procs();
    for (int t = 1; t <= max; t *= 2) b->Arg(t);
    if (max & (max - 1)) b->Arg(max);
}

BENCHMARK(BM_SeriesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SeriesParallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FluxSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FluxParallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();

} // namespace

BENCHMARK_MAIN();
