#include "boa/width_calculator.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "boa/errors.hpp"

namespace boa {

std::vector<int> glue_candidates(std::size_t epochs) {
    std::vector<int> out;
    for (std::size_t g = 1; g <= epochs; g *= 2) {
        out.push_back(static_cast<int>(g));
    }
    return out;
}

GluedWorkload glue(const WorkloadSpec& workload, const GlueConfig& config) {
    if (config.glue.size() != workload.class_count()) {
        throw std::invalid_argument("glue configuration must have one entry per class");
    }
    GluedWorkload out{workload, {}};
    std::vector<JobClassSpec> classes;
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        const auto& cls = workload.classes()[i];
        const int g = config.glue[i];
        if (g < 1 || static_cast<std::size_t>(g) > cls.epochs.size()) {
            throw std::invalid_argument("glue length for class '" + cls.class_id + "' out of range");
        }
        JobClassSpec glued = cls;
        glued.epochs.clear();
        auto& blocks = out.members.emplace_back();
        for (std::size_t start = 0; start < cls.epochs.size(); start += static_cast<std::size_t>(g)) {
            const std::size_t end = std::min(cls.epochs.size(), start + static_cast<std::size_t>(g));
            auto& members = blocks.emplace_back();
            for (std::size_t j = start; j < end; ++j) members.push_back(j);

            if (members.size() == 1) {
                glued.epochs.push_back(cls.epochs[start]);
                continue;
            }
            EpochSpec super;
            super.mean_size = 0.0;
            double top = 1.0;
            for (auto j : members) {
                super.mean_size += cls.epochs[j].mean_size;
                top = std::max(top, workload.hull(i, j).saturation_width());
            }
            std::vector<SpeedupPoint> pts;
            for (double k = 1.0; k <= top; k += 1.0) {
                double time_per_size = 0.0;
                for (auto j : members) {
                    time_per_size += cls.epochs[j].mean_size / workload.hull(i, j).eval(k);
                }
                pts.push_back({k, k == 1.0 ? 1.0 : super.mean_size / time_per_size});
            }
            super.profile = SpeedupProfile(std::move(pts));
            glued.epochs.push_back(std::move(super));
        }
        classes.push_back(std::move(glued));
    }
    out.workload = WorkloadSpec(std::move(classes));
    return out;
}

WidthPlan expand_plan(const WidthPlan& glued_plan, const GluedWorkload& glued) {
    WidthPlan plan = glued_plan;
    plan.widths.clear();
    for (std::size_t i = 0; i < glued.members.size(); ++i) {
        auto& row = plan.widths.emplace_back();
        for (std::size_t b = 0; b < glued.members[i].size(); ++b) {
            for (std::size_t n = 0; n < glued.members[i][b].size(); ++n) {
                row.push_back(glued_plan.widths.at(i).at(b));
            }
        }
    }
    return plan;
}

namespace {

struct Candidate {
    WidthPlan plan;
    PlanEvaluation evaluation;
};

WidthPlan all_ones(const WorkloadSpec& workload, double budget) {
    WidthPlan plan;
    plan.budget = budget;
    plan.kind = PlanKind::integer;
    plan.glue.assign(workload.class_count(), 1);
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        plan.widths.emplace_back(workload.epoch_count(i), 1.0);
    }
    return plan;
}

std::optional<Candidate> evaluate_config(const WorkloadSpec& workload, double budget, const GlueConfig& config,
                                         const WidthCalculatorOptions& options) {
    const auto glued = glue(workload, config);
    const double floor_cost = compute_loads(glued.workload).total;
    double run_budget = budget;
    for (int it = 0; it < options.max_shrink_iterations; ++it) {
        WidthPlan plan;
        const bool at_floor = !(run_budget > floor_cost);
        if (at_floor) {
            plan = all_ones(glued.workload, budget);
        } else {
            plan = solve_boa(glued.workload, run_budget);
            for (std::size_t i = 0; i < plan.widths.size(); ++i) {
                for (std::size_t b = 0; b < plan.widths[i].size(); ++b) {
                    plan.widths[i][b] = glued.workload.hull(i, b).round(plan.widths[i][b]);
                }
            }
        }
        plan.kind = PlanKind::integer;
        plan.budget = budget;
        plan.run_budget = at_floor ? floor_cost : run_budget;
        plan.glue = config.glue;
        plan = expand_plan(plan, glued);

        auto evaluation = analytic_eval(plan, workload, true);
        if (evaluation.budget <= budget) {
            return Candidate{std::move(plan), std::move(evaluation)};
        }
        if (at_floor) {
            return std::nullopt;
        }
        run_budget *= options.shrink;
    }
    return std::nullopt;
}

}  // namespace

WidthCalculatorResult boa_width_calculator(const WorkloadSpec& workload, double budget, std::uint64_t seed,
                                           const WidthCalculatorOptions& options) {
    const auto ones = all_ones(workload, budget);
    const auto floor_eval = analytic_eval(ones, workload, true);
    if (!(floor_eval.budget <= budget)) {
        std::ostringstream os;
        os << "budget " << budget << " cannot cover the all-ones plan with rescale charges ("
           << floor_eval.budget << "); total load " << compute_loads(workload).total;
        throw InfeasibleBudget(os.str(), floor_eval.budget, budget);
    }

    std::vector<GlueConfig> configs;
    configs.push_back({std::vector<int>(workload.class_count(), 1)});
    for (int n = 1; n <= options.samples; ++n) {
        std::seed_seq seq{seed, static_cast<std::uint64_t>(n)};
        std::mt19937_64 rng(seq);
        GlueConfig cfg;
        for (std::size_t i = 0; i < workload.class_count(); ++i) {
            const auto choices = glue_candidates(workload.epoch_count(i));
            std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
            cfg.glue.push_back(choices[pick(rng)]);
        }
        configs.push_back(std::move(cfg));
    }

    std::map<GlueConfig, std::optional<Candidate>> evaluated;
    for (const auto& cfg : configs) {
        if (!evaluated.contains(cfg)) {
            evaluated.emplace(cfg, evaluate_config(workload, budget, cfg, options));
        }
    }

    // Map iteration is lexicographic in the glue vector, so strict improvement
    // keeps the smaller vector on ties.
    const Candidate* best = nullptr;
    for (const auto& [cfg, cand] : evaluated) {
        if (cand && (best == nullptr || cand->evaluation.mean_jct < best->evaluation.mean_jct)) {
            best = &*cand;
        }
    }
    if (best == nullptr) {
        throw InfeasibleBudget("no glue configuration produced a plan within budget", floor_eval.budget, budget);
    }
    return {best->plan, best->evaluation, evaluated.size()};
}

WidthPlan PlanRefresh::compute(double now) const {
    if (!estimate) {
        throw std::logic_error("plan refresh has no workload estimate");
    }
    return boa_width_calculator(estimate(now), budget, seed, options).plan;
}

PlanRefresh recompute_schedule(double interval, double budget, std::uint64_t seed,
                               std::function<WorkloadSpec(double now)> estimate) {
    if (!(interval > 0.0)) {
        throw std::invalid_argument("recompute interval must be positive");
    }
    PlanRefresh r;
    r.interval = interval;
    r.budget = budget;
    r.seed = seed;
    r.estimate = std::move(estimate);
    return r;
}

std::function<WorkloadSpec(double)> static_estimate(WorkloadSpec workload) {
    return [w = std::move(workload)](double) { return w; };
}

}  // namespace boa
