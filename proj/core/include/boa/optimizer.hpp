#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "boa/speedup.hpp"
#include "boa/workload.hpp"

namespace boa {

enum class PlanKind { fractional, integer };

/// Fixed-width allocation: every class-i job in epoch j runs on widths[i][j] GPUs.
struct WidthPlan {
    std::vector<std::vector<double>> widths;
    std::vector<int> glue;    // per class block length; 1 means no gluing
    double budget = 0.0;      // budget the plan was requested for
    double run_budget = 0.0;  // budget handed to the fractional solver
    PlanKind kind = PlanKind::fractional;

    double width(std::size_t cls, std::size_t epoch) const { return widths.at(cls).at(epoch); }

    friend bool operator==(const WidthPlan&, const WidthPlan&) = default;
};

struct PlanEvaluation {
    double mean_jct = 0.0;  // seconds
    double budget = 0.0;    // time-average GPUs
    std::vector<double> per_class_jct;
    /// Expected rescale events per job, counting the initial placement.
    std::vector<double> rescale_count;
};

/// Throws PlanCoverageError listing every (class, epoch) without a usable width.
void require_coverage(const WidthPlan& plan, const WorkloadSpec& workload);

/// Closed-form mean JCT and time-average GPU usage of a fixed-width plan.
///
/// With `include_rescale`, each job pays its class's mean rescale time at
/// placement and at every epoch boundary where the width changes, holding the
/// new width while it does.
PlanEvaluation analytic_eval(const WidthPlan& plan, const WorkloadSpec& workload, bool include_rescale);

/// sum_ij rho_ij / s_ij(k_ij), the quantity the fractional solver minimizes.
double boa_objective(const WidthPlan& plan, const WorkloadSpec& workload);

/// sum_ij rho_ij * k_ij / s_ij(k_ij), the rescale-free operating budget.
double boa_cost(const WidthPlan& plan, const WorkloadSpec& workload);

/// Budget-optimal fractional widths, k_ij in [1, saturation width].
/// Throws InfeasibleBudget when the budget does not exceed the total load.
WidthPlan solve_boa(const WorkloadSpec& workload, double budget);

struct KktReport {
    bool ok = false;
    bool budget_binding = false;
    double multiplier = 0.0;
    std::vector<std::string> violations;
};

/// Checks stationarity and complementary slackness of a fractional plan in
/// z = 1/s coordinates. Each term admits an interval of budget multipliers
/// determined by where its width sits on the hull; the plan is optimal iff the
/// intervals share a point (within `tolerance` relative) and that point is 0
/// whenever the budget is slack by more than 1e-6 * budget.
KktReport kkt_check(const WidthPlan& plan, const WorkloadSpec& workload, double budget,
                    double tolerance = 1e-4);

// ---------------------------------------------------------------------------
// Heterogeneous GPU types

struct GpuTypeSpec {
    std::string type_id;
    double cost_per_hour = 1.0;
    /// Per (class, epoch) speedup on this type; s(1) need not be 1.
    std::vector<std::vector<ConcaveHull>> hulls;
};

/// Indexed [class][epoch][type].
struct HeterogeneousPlan {
    std::vector<std::vector<std::vector<double>>> fractions;
    std::vector<std::vector<std::vector<double>>> widths;
};

/// Minimizes sum p * rho / s^(h)(k) subject to sum c^(h) * p * rho * k / s^(h)(k) <= budget
/// and sum_h p = 1. Throws InfeasibleBudget when even the cheapest
/// assignment costs at least `budget`.
HeterogeneousPlan solve_heterogeneous(const WorkloadSpec& workload, std::span<const GpuTypeSpec> types,
                                      double budget);

double heterogeneous_objective(const HeterogeneousPlan& plan, const WorkloadSpec& workload,
                               std::span<const GpuTypeSpec> types);
double heterogeneous_cost(const HeterogeneousPlan& plan, const WorkloadSpec& workload,
                          std::span<const GpuTypeSpec> types);

}  // namespace boa
