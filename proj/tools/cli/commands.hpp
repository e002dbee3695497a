#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "boa/simulator.hpp"
#include "boa/trace.hpp"
#include "boa/workload.hpp"

namespace boa::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_infeasible = 3;

struct FrontierRow {
    double budget = 0.0;
    bool feasible = false;
    double plan_budget = 0.0;  // budget whose width-calculator run produced the plan
    double analytic_mean_jct = 0.0;
    double analytic_budget = 0.0;
    double sim_mean_jct = 0.0;
    double sim_p95_jct = 0.0;
    double sim_usage = 0.0;
};

/// One row per budget in ascending order, all simulated on `trace`.
///
/// A plan computed for a smaller budget stays feasible at every larger one, so
/// when it has lower analytic JCT than the plan computed at the larger budget
/// it is kept instead. This makes the analytic column a true frontier.
/// Infeasible budgets yield rows with feasible == false.
std::vector<FrontierRow> frontier(const WorkloadSpec& workload, const Trace& trace, std::vector<double> budgets,
                                  std::uint64_t seed, const SimConfig& config);

/// Columns: budget,status,plan_budget,analytic_mean_jct,analytic_budget,sim_mean_jct,sim_p95_jct,sim_usage
void write_frontier_csv(std::ostream& out, const std::vector<FrontierRow>& rows);

/// Columns: policy,parameter,mean_jct,p95_jct,time_avg_usage
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace boa::cli
