#include <benchmark/benchmark.h>

#include "boa/width_calculator.hpp"
#include "fixtures.hpp"

namespace {

using namespace boa;

WorkloadSpec epoch_heavy(int epochs) {
    std::mt19937_64 rng(epochs);
    std::vector<JobClassSpec> out;
    for (int i = 0; i < 3; ++i) {
        std::vector<EpochSpec> es;
        for (int j = 0; j < epochs; ++j) es.push_back(boa::testing::epoch(50.0 + j, oracle::random_profile(rng, 5, 8)));
        out.push_back(boa::testing::job_class("c" + std::to_string(i), 0.002 * (i + 1), std::move(es), 20.0));
    }
    return WorkloadSpec(std::move(out));
}

void BM_WidthCalculator(benchmark::State& state) {
    const auto w = epoch_heavy(static_cast<int>(state.range(0)));
    const double b = 1.6 * compute_loads(w).total + w.total_rate() * 20.0 * 4.0;
    for (auto _ : state) benchmark::DoNotOptimize(boa_width_calculator(w, b, 1));
}
BENCHMARK(BM_WidthCalculator)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
