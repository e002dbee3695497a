#include <benchmark/benchmark.h>

#include "boa/optimizer.hpp"
#include "fixtures.hpp"

namespace {

using namespace boa;

// Instance with `classes` classes of two epochs each, hulls up to 16 GPUs.
WorkloadSpec wide_instance(int classes) {
    std::mt19937_64 rng(classes);
    std::vector<JobClassSpec> out;
    for (int i = 0; i < classes; ++i) {
        out.push_back(boa::testing::job_class(
            "c" + std::to_string(i), 0.001 + 0.0005 * (i % 7),
            {boa::testing::epoch(200.0 + 37.0 * i, oracle::random_profile(rng, 6, 16)),
             boa::testing::epoch(400.0 + 11.0 * i, oracle::random_profile(rng, 6, 16))}));
    }
    return WorkloadSpec(std::move(out));
}

void BM_SolveBoa(benchmark::State& state) {
    const auto w = wide_instance(static_cast<int>(state.range(0)));
    const double b = 1.5 * compute_loads(w).total;
    for (auto _ : state) benchmark::DoNotOptimize(solve_boa(w, b));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveBoa)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_Hull(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto p = oracle::random_profile(rng, static_cast<int>(state.range(0)), 4 * static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ConcaveHull(p));
}
BENCHMARK(BM_Hull)->Arg(4)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
