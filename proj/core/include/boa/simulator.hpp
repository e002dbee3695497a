#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "boa/metrics.hpp"
#include "boa/optimizer.hpp"
#include "boa/trace.hpp"
#include "boa/width_calculator.hpp"
#include "boa/workload.hpp"

namespace boa {

struct SimConfig {
    int gpus_per_node = 4;
    double provisioning_delay = 0.0;  // seconds a job waits for newly rented GPUs
    std::optional<double> horizon;    // run to completion when unset
    double quantum = 60.0;            // efficiency-target decision period
    std::uint64_t seed = 0;           // extra rescale draws beyond those in the trace

    void validate() const;
};

/// Every class-i job in epoch j runs on plan.widths[i][j] GPUs. With a refresh
/// hook the plan is recomputed periodically; running jobs pick up new widths
/// at their next epoch boundary.
struct FixedWidthPolicy {
    WidthPlan plan;
    std::optional<PlanRefresh> refresh;
};

/// Autoscaler that keeps cluster efficiency within a band around `target`.
struct EfficiencyTargetPolicy {
    double target = 0.5;
};

using Policy = std::variant<FixedWidthPolicy, EfficiencyTargetPolicy>;

struct SimCounters {
    std::size_t queue_events = 0;      // times a job waited without GPUs
    std::size_t width_deviations = 0;  // fixed-width placements off the plan in force
    std::size_t plan_computations = 0;
    std::size_t rescales = 0;
};

struct SimResult {
    EventLog log;
    SimMetrics metrics;
    SimCounters counters;
    /// Per job: sum over running intervals of duration * speedup.
    std::vector<double> work_done;
};

/// Event-driven execution of `policy` on `trace`. Work depletes at rate
/// s_ij(k) while running; every placement or width change is followed by a
/// rescale of the pre-drawn duration during which the job holds its new width
/// and makes no progress. Deterministic in its inputs.
SimResult simulate(const Trace& trace, const Policy& policy, const WorkloadSpec& workload,
                   const SimConfig& config);

struct NamedPolicy {
    std::string name;
    double parameter = 0.0;  // budget for fixed-width, target for efficiency
    Policy policy;
};

struct ComparisonRow {
    std::string policy;
    double parameter = 0.0;
    double mean_jct = 0.0;
    double p95_jct = 0.0;
    double time_avg_usage = 0.0;
};

/// Simulates every policy on the same trace concurrently. Rows follow input
/// order. Requires at least two policies.
std::vector<ComparisonRow> compare(const Trace& trace, const WorkloadSpec& workload,
                                   const std::vector<NamedPolicy>& policies, const SimConfig& config);

}  // namespace boa
