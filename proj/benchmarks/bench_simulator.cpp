#include <benchmark/benchmark.h>

#include "boa/simulator.hpp"
#include "fixtures.hpp"

namespace {

using namespace boa;

WorkloadSpec sim_workload() {
    using boa::testing::epoch;
    using boa::testing::profile;
    return WorkloadSpec({boa::testing::job_class("a", 0.01, {epoch(600.0, boa::testing::profile_a(), SizeDistKind::exponential)}, 20.0),
                         boa::testing::job_class("b", 0.004,
                                                 {epoch(900.0, boa::testing::profile_b()),
                                                  epoch(1500.0, profile({{1, 1}, {2, 1.9}, {4, 3.5}, {8, 6.0}}))},
                                                 20.0)});
}

void BM_SimulateFixedWidth(benchmark::State& state) {
    const auto w = sim_workload();
    const auto trace = gen_trace(w, ArrivalModel::calibrated(w.total_rate(), 2.65), state.range(0), 1);
    const auto plan = boa_width_calculator(w, 2.0 * compute_loads(w).total, 1).plan;
    for (auto _ : state) benchmark::DoNotOptimize(simulate(trace, FixedWidthPolicy{plan, {}}, w, {}));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateFixedWidth)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SimulateEfficiencyTarget(benchmark::State& state) {
    const auto w = sim_workload();
    const auto trace = gen_trace(w, ArrivalModel::calibrated(w.total_rate(), 2.65), state.range(0), 1);
    for (auto _ : state) benchmark::DoNotOptimize(simulate(trace, EfficiencyTargetPolicy{0.5}, w, {}));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateEfficiencyTarget)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
