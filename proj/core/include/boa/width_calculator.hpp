#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "boa/optimizer.hpp"
#include "boa/workload.hpp"

namespace boa {

/// Per-class block lengths: g_i consecutive epochs share one width.
struct GlueConfig {
    std::vector<int> glue;

    friend auto operator<=>(const GlueConfig&, const GlueConfig&) = default;
};

/// {1, 2, 4, ..., 2^floor(log2(epochs))}.
std::vector<int> glue_candidates(std::size_t epochs);

/// A workload whose epochs are super-epochs of the original.
struct GluedWorkload {
    WorkloadSpec workload;
    /// members[i][b] lists the original epoch indices forming super-epoch b of class i.
    std::vector<std::vector<std::vector<std::size_t>>> members;
};

/// Glues consecutive epochs. A super-epoch's mean size is the sum of its
/// members' and its speedup at integer width k is the size-weighted harmonic
/// mean sum(E[X]) / sum(E[X] / s(k)), passed through the concave hull. The last
/// block of a class holds the remainder when g does not divide the epoch count.
GluedWorkload glue(const WorkloadSpec& workload, const GlueConfig& config);

/// Copies each super-epoch width onto its member epochs.
WidthPlan expand_plan(const WidthPlan& glued_plan, const GluedWorkload& glued);

struct WidthCalculatorOptions {
    int samples = 50;
    double shrink = 0.99;
    int max_shrink_iterations = 2000;
};

struct WidthCalculatorResult {
    WidthPlan plan;              // integer widths over the original epochs
    PlanEvaluation evaluation;   // rescale-aware
    std::size_t configurations = 0;  // distinct glue configurations evaluated
};

/// Integer fixed-width plan minimizing rescale-aware mean JCT within `budget`.
///
/// Evaluates the all-ones glue configuration plus `samples` uniformly drawn
/// ones (draw n seeded from (seed, n)). For each, the running budget starts
/// at `budget` and shrinks geometrically until the rounded plan's
/// rescale-aware cost fits. Ties on mean JCT go to the lexicographically
/// smaller glue vector. Throws InfeasibleBudget when even the all-ones plan
/// does not fit.
WidthCalculatorResult boa_width_calculator(const WorkloadSpec& workload, double budget, std::uint64_t seed,
                                           const WidthCalculatorOptions& options = {});

/// Periodic plan recomputation for the fixed-width simulator policy.
struct PlanRefresh {
    double interval = 900.0;        // seconds between recomputations
    double compute_latency = 0.0;   // seconds until a recomputed plan takes effect
    double budget = 0.0;
    std::uint64_t seed = 0;         // reused unchanged by every recomputation
    WidthCalculatorOptions options{};
    /// Workload estimate available at a given simulation time.
    std::function<WorkloadSpec(double now)> estimate;

    WidthPlan compute(double now) const;
};

/// Validates the interval and wires a refresh hook around `estimate`.
PlanRefresh recompute_schedule(double interval, double budget, std::uint64_t seed,
                               std::function<WorkloadSpec(double now)> estimate);

/// Estimate that always returns the same workload.
std::function<WorkloadSpec(double)> static_estimate(WorkloadSpec workload);

}  // namespace boa
