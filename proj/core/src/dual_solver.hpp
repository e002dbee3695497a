#pragma once

// Lagrangian dual on the budget constraint, shared by the homogeneous and
// heterogeneous solvers. Internal to boa_core.

#include <cstddef>
#include <vector>

#include "boa/speedup.hpp"

namespace boa::detail {

/// One candidate placement of a term: `gpus` GPUs of some type.
/// Per unit of load it contributes `obj` = 1/s to the objective and
/// `cost` = price * k / s to the budget.
struct DualOption {
    std::size_t type = 0;
    const ConcaveHull* hull = nullptr;
    double price = 1.0;
    double gpus = 1.0;
    double speedup = 1.0;
    double obj = 1.0;
    double cost = 1.0;
};

/// One (class, epoch) term of the separable problem.
struct DualTerm {
    double load = 0.0;
    std::vector<DualOption> options;  // rising hull vertices of every type
};

/// A term's share of the solution: fraction of the term's load placed on
/// `type` at `gpus` GPUs.
struct DualAssignment {
    std::size_t type = 0;
    double fraction = 1.0;
    double gpus = 1.0;
};

struct DualSolution {
    std::vector<std::vector<DualAssignment>> assignments;  // per term
    double multiplier = 0.0;
};

DualTerm make_term(double load, const std::vector<std::pair<const ConcaveHull*, double>>& hulls_and_prices);

/// Minimum achievable budget use (every term at its cheapest option).
double minimum_cost(const std::vector<DualTerm>& terms);

/// Solves min sum load*obj subject to sum load*cost <= budget with each term
/// choosing a point on the lower envelope of its options. For a fixed
/// multiplier the problem separates and every term picks a vertex; the
/// multiplier is bisected until the budget is bracketed and the terms whose
/// choice flips inside the bracket are moved in order of efficiency, the
/// last one partially. Requires minimum_cost(terms) < budget.
DualSolution solve_dual(const std::vector<DualTerm>& terms, double budget);

}  // namespace boa::detail
