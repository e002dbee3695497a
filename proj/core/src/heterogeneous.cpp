#include <sstream>
#include <stdexcept>

#include "boa/errors.hpp"
#include "boa/optimizer.hpp"
#include "dual_solver.hpp"

namespace boa {

namespace {

void validate_types(const WorkloadSpec& workload, std::span<const GpuTypeSpec> types) {
    if (types.empty()) {
        throw std::invalid_argument("at least one GPU type is required");
    }
    for (const auto& t : types) {
        if (!(t.cost_per_hour > 0.0)) {
            throw std::invalid_argument("GPU type '" + t.type_id + "': cost_per_hour must be positive");
        }
        if (t.hulls.size() != workload.class_count()) {
            throw std::invalid_argument("GPU type '" + t.type_id + "': hull table does not match the classes");
        }
        for (std::size_t i = 0; i < workload.class_count(); ++i) {
            if (t.hulls[i].size() != workload.epoch_count(i)) {
                throw std::invalid_argument("GPU type '" + t.type_id + "': hull table does not match the epochs");
            }
        }
    }
}

}  // namespace

HeterogeneousPlan solve_heterogeneous(const WorkloadSpec& workload, std::span<const GpuTypeSpec> types,
                                      double budget) {
    validate_types(workload, types);
    const auto loads = compute_loads(workload);
    std::vector<detail::DualTerm> terms;
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        for (std::size_t j = 0; j < workload.epoch_count(i); ++j) {
            std::vector<std::pair<const ConcaveHull*, double>> per_type;
            for (const auto& t : types) {
                per_type.emplace_back(&t.hulls[i][j], t.cost_per_hour);
            }
            terms.push_back(detail::make_term(loads.per_epoch[i][j], per_type));
        }
    }
    const double floor_cost = detail::minimum_cost(terms);
    if (!(floor_cost < budget)) {
        std::ostringstream os;
        os << "budget " << budget << " does not exceed the cheapest sustainable cost " << floor_cost;
        throw InfeasibleBudget(os.str(), floor_cost, budget);
    }

    const auto sol = detail::solve_dual(terms, budget);
    HeterogeneousPlan plan;
    std::size_t t = 0;
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        auto& frac_row = plan.fractions.emplace_back();
        auto& width_row = plan.widths.emplace_back();
        for (std::size_t j = 0; j < workload.epoch_count(i); ++j, ++t) {
            std::vector<double> p(types.size(), 0.0);
            std::vector<double> k(types.size(), 1.0);
            for (const auto& a : sol.assignments[t]) {
                p[a.type] += a.fraction;
                k[a.type] = a.gpus;
            }
            frac_row.push_back(std::move(p));
            width_row.push_back(std::move(k));
        }
    }
    return plan;
}

double heterogeneous_objective(const HeterogeneousPlan& plan, const WorkloadSpec& workload,
                               std::span<const GpuTypeSpec> types) {
    const auto loads = compute_loads(workload);
    double total = 0.0;
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        for (std::size_t j = 0; j < workload.epoch_count(i); ++j) {
            for (std::size_t h = 0; h < types.size(); ++h) {
                const double p = plan.fractions.at(i).at(j).at(h);
                if (p == 0.0) continue;
                total += p * loads.per_epoch[i][j] / types[h].hulls[i][j].eval(plan.widths[i][j][h]);
            }
        }
    }
    return total;
}

double heterogeneous_cost(const HeterogeneousPlan& plan, const WorkloadSpec& workload,
                          std::span<const GpuTypeSpec> types) {
    const auto loads = compute_loads(workload);
    double total = 0.0;
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        for (std::size_t j = 0; j < workload.epoch_count(i); ++j) {
            for (std::size_t h = 0; h < types.size(); ++h) {
                const double p = plan.fractions.at(i).at(j).at(h);
                if (p == 0.0) continue;
                const double k = plan.widths[i][j][h];
                total += types[h].cost_per_hour * p * loads.per_epoch[i][j] * k / types[h].hulls[i][j].eval(k);
            }
        }
    }
    return total;
}

}  // namespace boa
