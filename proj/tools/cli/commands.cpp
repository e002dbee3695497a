#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "boa/arrival.hpp"
#include "boa/efficiency_target.hpp"
#include "boa/errors.hpp"
#include "boa/plan_io.hpp"
#include "boa/width_calculator.hpp"
#include "boa/workload_io.hpp"

namespace boa::cli {

namespace {

/// A problem with the command line or its input files.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    return f;
}

// Writes to `path`, or to `fallback` when path is "-" or empty.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(fallback);
        return;
    }
    auto f = open_out(path);
    body(f);
}

WorkloadSpec load_workload(const std::string& path) {
    try {
        return read_workload(std::filesystem::path(path));
    } catch (const std::invalid_argument& e) {
        throw UsageError(path + ": " + e.what());
    }
}

Trace load_trace(const std::string& path, const WorkloadSpec& workload) {
    try {
        auto trace = read_trace(std::filesystem::path(path));
        validate_trace(trace, workload);
        return trace;
    } catch (const ParseError& e) {
        throw UsageError(path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError(path + ": " + e.what());
    }
}

struct SimFlags {
    int gpus_per_node = 4;
    double provisioning_delay = 0.0;
    double horizon = 0.0;
    double quantum = 60.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--gpus-per-node", gpus_per_node, "GPUs per rented node")->check(CLI::PositiveNumber);
        cmd->add_option("--provisioning-delay", provisioning_delay, "seconds to acquire new GPUs")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--horizon", horizon, "stop at this time (seconds); 0 runs to completion")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--quantum", quantum, "efficiency-target decision period (seconds)")
            ->check(CLI::PositiveNumber);
    }

    SimConfig config(std::uint64_t seed) const {
        SimConfig c;
        c.gpus_per_node = gpus_per_node;
        c.provisioning_delay = provisioning_delay;
        if (horizon > 0.0) c.horizon = horizon;
        c.quantum = quantum;
        c.seed = seed;
        return c;
    }
};

// ---------------------------------------------------------------------------

struct GenTraceArgs {
    std::string spec;
    std::string model = "poisson";
    double c2 = 2.65;
    double low_ratio = 0.1;
    double high_fraction = 0.1;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    std::string out = "-";
};

int cmd_gen_trace(const GenTraceArgs& a, std::ostream& out, std::ostream& err) {
    const auto workload = load_workload(a.spec);
    const auto model = a.model == "poisson"
                           ? ArrivalModel::poisson(workload.total_rate())
                           : ArrivalModel::calibrated(workload.total_rate(), a.c2, a.low_ratio, a.high_fraction);
    const auto trace = gen_trace(workload, model, a.n, a.seed);
    emit(a.out, out, [&](std::ostream& o) { write_trace(o, trace); });
    if (a.out != "-") {
        err << "wrote " << trace.events.size() << " arrivals, interarrival C2 " << empirical_interarrival_c2(trace)
            << " (model " << model.interarrival_c2() << ")\n";
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct PlanArgs {
    std::string spec;
    double budget = 0.0;
    std::uint64_t seed = 0;
    std::string out = "-";
};

int cmd_solve(const PlanArgs& a, std::ostream& out, std::ostream& err) {
    const auto workload = load_workload(a.spec);
    const auto plan = solve_boa(workload, a.budget);
    const auto ev = analytic_eval(plan, workload, false);
    emit(a.out, out, [&](std::ostream& o) { write_plan(o, plan, workload); });
    err << "mean_jct " << ev.mean_jct << " budget " << ev.budget << '\n';
    return exit_ok;
}

int cmd_widths(const PlanArgs& a, std::ostream& out, std::ostream& err) {
    const auto workload = load_workload(a.spec);
    const auto result = boa_width_calculator(workload, a.budget, a.seed);
    emit(a.out, out, [&](std::ostream& o) { write_plan(o, result.plan, workload, result.evaluation); });
    err << "mean_jct " << result.evaluation.mean_jct << " budget " << result.evaluation.budget << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string spec;
    std::string trace;
    std::string policy = "boa";
    std::optional<double> budget;
    std::string plan;
    double target_c = 0.5;
    double recompute_interval = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    SimFlags sim;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream&) {
    const auto workload = load_workload(a.spec);
    const auto trace = load_trace(a.trace, workload);
    const auto config = a.sim.config(a.seed);

    nlohmann::json summary;
    summary["policy"] = a.policy;
    Policy policy;
    std::optional<PlanEvaluation> analytic;
    if (a.policy == "boa") {
        FixedWidthPolicy fixed;
        double budget = 0.0;
        if (!a.plan.empty()) {
            try {
                fixed.plan = read_plan(std::filesystem::path(a.plan), workload);
            } catch (const std::invalid_argument& e) {
                throw UsageError(a.plan + ": " + e.what());
            }
            budget = fixed.plan.budget;
        } else if (a.budget) {
            budget = *a.budget;
            fixed.plan = boa_width_calculator(workload, budget, a.seed).plan;
        } else {
            throw UsageError("policy boa needs --budget or --plan");
        }
        if (a.recompute_interval > 0.0) {
            fixed.refresh = recompute_schedule(a.recompute_interval, budget, a.seed, static_estimate(workload));
        }
        analytic = analytic_eval(fixed.plan, workload, true);
        summary["parameter"] = budget;
        policy = std::move(fixed);
    } else {
        summary["parameter"] = a.target_c;
        summary["delta"] = efficiency_band(a.target_c);
        policy = EfficiencyTargetPolicy{a.target_c};
    }

    const auto result = simulate(trace, policy, workload, config);
    const auto& m = result.metrics;
    summary["mean_jct"] = m.mean_jct;
    summary["p95_jct"] = m.p95_jct;
    summary["time_avg_usage"] = m.time_avg_usage;
    summary["completed"] = m.completed;
    summary["unfinished"] = m.unfinished;
    summary["horizon"] = m.horizon;
    summary["idle_gpu_seconds"] = m.idle_gpu_seconds;
    summary["interarrival_c2"] = m.interarrival_c2;
    summary["queue_events"] = result.counters.queue_events;
    summary["width_deviations"] = result.counters.width_deviations;
    summary["plan_computations"] = result.counters.plan_computations;
    summary["rescales"] = result.counters.rescales;
    if (analytic) {
        summary["analytic"] = {{"mean_jct", analytic->mean_jct}, {"budget", analytic->budget}};
    }

    out << summary.dump(2) << '\n';
    if (!a.out.empty()) {
        auto s = open_out(a.out + ".summary.json");
        s << summary.dump(2) << '\n';
        auto events = open_out(a.out + ".events.jsonl");
        write_event_log(events, result.log);
        auto jobs = open_out(a.out + ".jobs.csv");
        write_jobs_csv(jobs, m, workload);
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct FrontierArgs {
    std::string spec;
    std::string trace;
    std::vector<double> budgets;
    std::uint64_t seed = 0;
    std::string out = "-";
    SimFlags sim;
};

int cmd_frontier(const FrontierArgs& a, std::ostream& out, std::ostream& err) {
    const auto workload = load_workload(a.spec);
    const auto trace = load_trace(a.trace, workload);
    const auto rows = frontier(workload, trace, a.budgets, a.seed, a.sim.config(a.seed));
    emit(a.out, out, [&](std::ostream& o) { write_frontier_csv(o, rows); });
    const auto bad = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.feasible; });
    if (bad > 0) err << bad << " budget(s) infeasible; flagged in the output\n";
    return exit_ok;
}

struct CompareArgs {
    std::string spec;
    std::string trace;
    std::vector<double> boa_budgets;
    std::vector<double> efficiency_targets;
    std::uint64_t seed = 0;
    std::string out = "-";
    SimFlags sim;
};

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream&) {
    if (a.boa_budgets.size() + a.efficiency_targets.size() < 2) {
        throw UsageError("compare needs at least two policies across --boa-budgets and --efficiency-targets");
    }
    for (double c : a.efficiency_targets) {
        if (!(c > 0.0 && c < 1.0)) throw UsageError("efficiency targets must lie in (0, 1)");
    }
    const auto workload = load_workload(a.spec);
    const auto trace = load_trace(a.trace, workload);
    std::vector<NamedPolicy> policies;
    for (double b : a.boa_budgets) {
        policies.push_back({"boa", b, FixedWidthPolicy{boa_width_calculator(workload, b, a.seed).plan, {}}});
    }
    for (double c : a.efficiency_targets) {
        policies.push_back({"efficiency", c, EfficiencyTargetPolicy{c}});
    }
    const auto rows = compare(trace, workload, policies, a.sim.config(a.seed));
    emit(a.out, out, [&](std::ostream& o) { write_comparison_csv(o, rows); });
    return exit_ok;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<FrontierRow> frontier(const WorkloadSpec& workload, const Trace& trace, std::vector<double> budgets,
                                  std::uint64_t seed, const SimConfig& config) {
    std::sort(budgets.begin(), budgets.end());
    std::vector<std::future<std::optional<WidthCalculatorResult>>> solves;
    for (double b : budgets) {
        solves.push_back(std::async(std::launch::async, [&workload, b, seed]() -> std::optional<WidthCalculatorResult> {
            try {
                return boa_width_calculator(workload, b, seed);
            } catch (const InfeasibleBudget&) {
                return std::nullopt;
            }
        }));
    }

    std::vector<FrontierRow> rows(budgets.size());
    std::vector<WidthPlan> plans(budgets.size());
    std::optional<std::size_t> best;
    std::vector<std::optional<WidthCalculatorResult>> results;
    for (auto& f : solves) results.push_back(f.get());
    for (std::size_t n = 0; n < budgets.size(); ++n) {
        auto& row = rows[n];
        row.budget = budgets[n];
        if (!results[n]) continue;
        if (!best || results[n]->evaluation.mean_jct <= results[*best]->evaluation.mean_jct) best = n;
        const auto& chosen = *results[*best];
        row.feasible = true;
        row.plan_budget = budgets[*best];
        row.analytic_mean_jct = chosen.evaluation.mean_jct;
        row.analytic_budget = chosen.evaluation.budget;
        plans[n] = chosen.plan;
    }

    std::vector<std::future<SimMetrics>> runs(budgets.size());
    for (std::size_t n = 0; n < budgets.size(); ++n) {
        if (!rows[n].feasible) continue;
        runs[n] = std::async(std::launch::async, [&trace, &workload, &config, plan = plans[n]] {
            return simulate(trace, FixedWidthPolicy{plan, {}}, workload, config).metrics;
        });
    }
    for (std::size_t n = 0; n < budgets.size(); ++n) {
        if (!rows[n].feasible) continue;
        const auto m = runs[n].get();
        rows[n].sim_mean_jct = m.mean_jct;
        rows[n].sim_p95_jct = m.p95_jct;
        rows[n].sim_usage = m.time_avg_usage;
    }
    return rows;
}

void write_frontier_csv(std::ostream& out, const std::vector<FrontierRow>& rows) {
    out << "budget,status,plan_budget,analytic_mean_jct,analytic_budget,sim_mean_jct,sim_p95_jct,sim_usage\n";
    out << std::setprecision(10);
    for (const auto& r : rows) {
        out << r.budget << ',';
        if (!r.feasible) {
            out << "infeasible,,,,,,\n";
            continue;
        }
        out << "ok," << r.plan_budget << ',' << r.analytic_mean_jct << ',' << r.analytic_budget << ','
            << r.sim_mean_jct << ',' << r.sim_p95_jct << ',' << r.sim_usage << '\n';
    }
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << "policy,parameter,mean_jct,p95_jct,time_avg_usage\n";
    out << std::setprecision(10);
    for (const auto& r : rows) {
        out << r.policy << ',' << r.parameter << ',' << r.mean_jct << ',' << r.p95_jct << ',' << r.time_avg_usage
            << '\n';
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Budget-optimal GPU width planning and cluster simulation"};
    app.name("boa");
    app.require_subcommand(1);

    GenTraceArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-trace", "generate an arrival trace from a workload spec");
    gen_cmd->add_option("spec", gen.spec, "workload spec (JSON)")->required()->check(CLI::ExistingFile);
    gen_cmd->add_option("--model", gen.model, "arrival model")->check(CLI::IsMember({"poisson", "bursty"}));
    gen_cmd->add_option("--c2", gen.c2, "target interarrival C2 for the bursty model")->check(CLI::Range(1.0, 1e6));
    gen_cmd->add_option("--low-ratio", gen.low_ratio, "low-phase rate as a fraction of the mean rate");
    gen_cmd->add_option("--high-fraction", gen.high_fraction, "fraction of time in the high phase");
    gen_cmd->add_option("--n", gen.n, "number of jobs")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen.seed, "random seed");
    gen_cmd->add_option("--out", gen.out, "output path, - for stdout");

    PlanArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "fractional budget-optimal widths");
    solve_cmd->add_option("spec", solve_args.spec, "workload spec (JSON)")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--budget", solve_args.budget, "time-average GPU budget")->required();
    solve_cmd->add_option("--out", solve_args.out, "plan path, - for stdout");

    PlanArgs widths_args;
    auto* widths_cmd = app.add_subcommand("widths", "integer widths with epoch gluing and rescale costs");
    widths_cmd->add_option("spec", widths_args.spec, "workload spec (JSON)")->required()->check(CLI::ExistingFile);
    widths_cmd->add_option("--budget", widths_args.budget, "time-average GPU budget")->required();
    widths_cmd->add_option("--seed", widths_args.seed, "glue sampling seed");
    widths_cmd->add_option("--out", widths_args.out, "plan path, - for stdout");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "simulate one policy on a trace");
    sim_cmd->add_option("spec", sim.spec, "workload spec (JSON)")->required()->check(CLI::ExistingFile);
    sim_cmd->add_option("trace", sim.trace, "trace file (JSON lines)")->required()->check(CLI::ExistingFile);
    sim_cmd->add_option("--policy", sim.policy, "boa or efficiency")->check(CLI::IsMember({"boa", "efficiency"}));
    sim_cmd->add_option("--budget", sim.budget, "budget for the boa policy");
    sim_cmd->add_option("--plan", sim.plan, "precomputed plan for the boa policy")->check(CLI::ExistingFile);
    sim_cmd->add_option("--target-c", sim.target_c, "efficiency target in (0, 1)")->check(CLI::Range(0.0, 1.0));
    sim_cmd->add_option("--recompute-interval", sim.recompute_interval, "plan refresh period (seconds), 0 disables")
        ->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--seed", sim.seed, "seed for glue sampling and extra rescale draws");
    sim_cmd->add_option("--out", sim.out, "prefix for .summary.json, .events.jsonl and .jobs.csv");
    sim.sim.attach(sim_cmd);

    FrontierArgs fr;
    auto* fr_cmd = app.add_subcommand("frontier",
                                      "analytic and simulated JCT per budget; CSV columns budget,status,plan_budget,"
                                      "analytic_mean_jct,analytic_budget,sim_mean_jct,sim_p95_jct,sim_usage");
    fr_cmd->add_option("spec", fr.spec, "workload spec (JSON)")->required()->check(CLI::ExistingFile);
    fr_cmd->add_option("trace", fr.trace, "trace file (JSON lines)")->required()->check(CLI::ExistingFile);
    fr_cmd->add_option("--budgets", fr.budgets, "budgets to evaluate")->required()->expected(1, -1);
    fr_cmd->add_option("--seed", fr.seed, "seed for glue sampling and extra rescale draws");
    fr_cmd->add_option("--out", fr.out, "CSV path, - for stdout");
    fr.sim.attach(fr_cmd);

    CompareArgs cmp;
    auto* cmp_cmd = app.add_subcommand("compare",
                                       "simulate several policies on one trace; CSV columns policy,parameter,"
                                       "mean_jct,p95_jct,time_avg_usage");
    cmp_cmd->add_option("spec", cmp.spec, "workload spec (JSON)")->required()->check(CLI::ExistingFile);
    cmp_cmd->add_option("trace", cmp.trace, "trace file (JSON lines)")->required()->check(CLI::ExistingFile);
    cmp_cmd->add_option("--boa-budgets", cmp.boa_budgets, "budgets for fixed-width plans")->expected(0, -1);
    cmp_cmd->add_option("--efficiency-targets", cmp.efficiency_targets, "targets for the autoscaler")
        ->expected(0, -1);
    cmp_cmd->add_option("--seed", cmp.seed, "seed for glue sampling and extra rescale draws");
    cmp_cmd->add_option("--out", cmp.out, "CSV path, - for stdout");
    cmp.sim.attach(cmp_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (gen_cmd->parsed()) return cmd_gen_trace(gen, out, err);
        if (solve_cmd->parsed()) return cmd_solve(solve_args, out, err);
        if (widths_cmd->parsed()) return cmd_widths(widths_args, out, err);
        if (sim_cmd->parsed()) return cmd_simulate(sim, out, err);
        if (fr_cmd->parsed()) return cmd_frontier(fr, out, err);
        if (cmp_cmd->parsed()) return cmd_compare(cmp, out, err);
    } catch (const InfeasibleBudget& e) {
        err << "infeasible: " << e.what() << " (minimum cost " << e.load() << ", budget " << e.budget() << ")\n";
        return exit_infeasible;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}

}  // namespace boa::cli
