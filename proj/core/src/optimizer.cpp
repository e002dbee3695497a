#include "boa/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "boa/errors.hpp"
#include "dual_solver.hpp"

namespace boa {

namespace {

std::string describe_missing(const std::vector<std::pair<std::size_t, std::size_t>>& missing) {
    std::ostringstream os;
    os << "plan does not cover (class, epoch):";
    for (const auto& [i, j] : missing) {
        os << " (" << i << ", " << j << ")";
    }
    return os.str();
}

}  // namespace

PlanCoverageError::PlanCoverageError(std::vector<std::pair<std::size_t, std::size_t>> missing)
    : std::invalid_argument(describe_missing(missing)), missing_(std::move(missing)) {}

namespace detail {

DualTerm make_term(double load, const std::vector<std::pair<const ConcaveHull*, double>>& hulls_and_prices) {
    DualTerm term;
    term.load = load;
    for (std::size_t h = 0; h < hulls_and_prices.size(); ++h) {
        const auto& [hull, price] = hulls_and_prices[h];
        for (const auto& v : hull->rising_vertices()) {
            term.options.push_back({h, hull, price, v.gpus, v.speedup, 1.0 / v.speedup, price * v.gpus / v.speedup});
        }
    }
    return term;
}

namespace {

std::size_t choose(const DualTerm& term, double multiplier) {
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < term.options.size(); ++n) {
        const auto& o = term.options[n];
        const double value = o.obj + multiplier * o.cost;
        const auto& b = term.options[best];
        const bool better =
            value < best_value ||
            (value == best_value &&
             (o.cost < b.cost || (o.cost == b.cost && (o.type < b.type || (o.type == b.type && o.gpus < b.gpus)))));
        if (better) {
            best = n;
            best_value = value;
        }
    }
    return best;
}

std::size_t cheapest(const DualTerm& term) {
    std::size_t best = 0;
    for (std::size_t n = 1; n < term.options.size(); ++n) {
        const auto& o = term.options[n];
        const auto& b = term.options[best];
        if (o.cost < b.cost || (o.cost == b.cost && o.obj < b.obj)) {
            best = n;
        }
    }
    return best;
}

struct Choice {
    std::vector<std::size_t> picks;
    double cost = 0.0;
};

Choice choose_all(const std::vector<DualTerm>& terms, double multiplier) {
    Choice c;
    c.picks.reserve(terms.size());
    for (const auto& t : terms) {
        c.picks.push_back(choose(t, multiplier));
        c.cost += t.load * t.options[c.picks.back()].cost;
    }
    return c;
}

}  // namespace

double minimum_cost(const std::vector<DualTerm>& terms) {
    double total = 0.0;
    for (const auto& t : terms) {
        total += t.load * t.options[cheapest(t)].cost;
    }
    return total;
}

DualSolution solve_dual(const std::vector<DualTerm>& terms, double budget) {
    DualSolution sol;
    sol.assignments.resize(terms.size());
    auto emit = [&](const Choice& c) {
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const auto& o = terms[t].options[c.picks[t]];
            sol.assignments[t] = {{o.type, 1.0, o.gpus}};
        }
    };

    // Saturation at exactly the saturation cost must not fail on summation order.
    Choice unconstrained = choose_all(terms, 0.0);
    if (unconstrained.cost <= budget * (1.0 + 1e-12)) {
        emit(unconstrained);
        sol.multiplier = 0.0;
        return sol;
    }

    // Bracket: cost(lo) > budget >= cost(hi). Cost is non-increasing in the multiplier.
    double lo = 0.0;
    double hi = 1.0;
    Choice at_hi = choose_all(terms, hi);
    for (int n = 0; n < 2000 && at_hi.cost > budget; ++n) {
        lo = hi;
        hi *= 2.0;
        at_hi = choose_all(terms, hi);
    }
    Choice at_lo = choose_all(terms, lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        Choice c = choose_all(terms, mid);
        if (c.cost > budget) {
            lo = mid;
            at_lo = std::move(c);
        } else {
            hi = mid;
            at_hi = std::move(c);
        }
        if (at_lo.picks == at_hi.picks) {
            break;
        }
    }
    sol.multiplier = hi;
    emit(at_hi);

    // Terms whose choice flips inside the bracket share (to rounding) the
    // critical multiplier. Spend the leftover budget on them, most efficient first.
    struct Flip {
        std::size_t term;
        double extra_cost;
        double gain;
    };
    std::vector<Flip> flips;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        if (at_lo.picks[t] == at_hi.picks[t]) continue;
        const auto& a = terms[t].options[at_hi.picks[t]];
        const auto& b = terms[t].options[at_lo.picks[t]];
        flips.push_back({t, terms[t].load * (b.cost - a.cost), terms[t].load * (a.obj - b.obj)});
    }
    std::stable_sort(flips.begin(), flips.end(), [](const Flip& x, const Flip& y) {
        return x.gain * y.extra_cost > y.gain * x.extra_cost;
    });

    // Leftovers below 1e-8 * budget are left unspent so that plans at the
    // feasibility boundary sit exactly on hull vertices.
    double remaining = budget - at_hi.cost;
    for (const auto& f : flips) {
        if (remaining <= 1e-8 * budget) break;
        const auto& from = terms[f.term].options[at_hi.picks[f.term]];
        const auto& to = terms[f.term].options[at_lo.picks[f.term]];
        if (f.extra_cost <= remaining) {
            sol.assignments[f.term] = {{to.type, 1.0, to.gpus}};
            remaining -= f.extra_cost;
            continue;
        }
        const double theta = remaining / f.extra_cost;
        if (from.type == to.type) {
            // Budget use is linear in z = 1/s along a hull segment.
            const double z = from.obj + theta * (to.obj - from.obj);
            const double gpus = std::clamp(from.hull->inverse(1.0 / z), std::min(from.gpus, to.gpus),
                                           std::max(from.gpus, to.gpus));
            sol.assignments[f.term] = {{from.type, 1.0, gpus}};
        } else {
            sol.assignments[f.term] = {{from.type, 1.0 - theta, from.gpus}, {to.type, theta, to.gpus}};
        }
        remaining = 0.0;
    }
    return sol;
}

}  // namespace detail

void require_coverage(const WidthPlan& plan, const WorkloadSpec& workload) {
    std::vector<std::pair<std::size_t, std::size_t>> missing;
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        for (std::size_t j = 0; j < workload.epoch_count(i); ++j) {
            const bool ok = i < plan.widths.size() && j < plan.widths[i].size() &&
                            std::isfinite(plan.widths[i][j]) && plan.widths[i][j] >= 1.0;
            if (!ok) missing.emplace_back(i, j);
        }
    }
    if (!missing.empty()) {
        throw PlanCoverageError(std::move(missing));
    }
}

PlanEvaluation analytic_eval(const WidthPlan& plan, const WorkloadSpec& workload, bool include_rescale) {
    require_coverage(plan, workload);
    PlanEvaluation ev;
    double weighted_jct = 0.0;
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        const auto& cls = workload.classes()[i];
        double class_jct = 0.0;
        double class_gpu_seconds = 0.0;
        double rescales = 0.0;
        for (std::size_t j = 0; j < cls.epochs.size(); ++j) {
            const double k = plan.widths[i][j];
            const double run = cls.epochs[j].mean_size / workload.hull(i, j).eval(k);
            const bool rescale = (j == 0) || (k != plan.widths[i][j - 1]);
            const double overhead = (include_rescale && rescale) ? cls.rescale_mean : 0.0;
            rescales += rescale ? 1.0 : 0.0;
            class_jct += run + overhead;
            class_gpu_seconds += k * (run + overhead);
        }
        ev.per_class_jct.push_back(class_jct);
        ev.rescale_count.push_back(rescales);
        weighted_jct += cls.arrival_rate * class_jct;
        ev.budget += cls.arrival_rate * class_gpu_seconds;
    }
    ev.mean_jct = weighted_jct / workload.total_rate();
    return ev;
}

double boa_objective(const WidthPlan& plan, const WorkloadSpec& workload) {
    require_coverage(plan, workload);
    const auto loads = compute_loads(workload);
    double total = 0.0;
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        for (std::size_t j = 0; j < workload.epoch_count(i); ++j) {
            total += loads.per_epoch[i][j] / workload.hull(i, j).eval(plan.widths[i][j]);
        }
    }
    return total;
}

double boa_cost(const WidthPlan& plan, const WorkloadSpec& workload) {
    require_coverage(plan, workload);
    const auto loads = compute_loads(workload);
    double total = 0.0;
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        for (std::size_t j = 0; j < workload.epoch_count(i); ++j) {
            const double k = plan.widths[i][j];
            total += loads.per_epoch[i][j] * k / workload.hull(i, j).eval(k);
        }
    }
    return total;
}

WidthPlan solve_boa(const WorkloadSpec& workload, double budget) {
    const auto loads = compute_loads(workload);
    std::vector<detail::DualTerm> terms;
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        for (std::size_t j = 0; j < workload.epoch_count(i); ++j) {
            terms.push_back(detail::make_term(loads.per_epoch[i][j], {{&workload.hull(i, j), 1.0}}));
        }
    }
    const double floor_cost = detail::minimum_cost(terms);
    if (!(floor_cost < budget)) {
        std::ostringstream os;
        os << "budget " << budget << " does not exceed the total load " << loads.total;
        throw InfeasibleBudget(os.str(), loads.total, budget);
    }

    const auto sol = detail::solve_dual(terms, budget);
    WidthPlan plan;
    plan.budget = budget;
    plan.run_budget = budget;
    plan.kind = PlanKind::fractional;
    plan.glue.assign(workload.class_count(), 1);
    std::size_t t = 0;
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        auto& row = plan.widths.emplace_back();
        for (std::size_t j = 0; j < workload.epoch_count(i); ++j, ++t) {
            row.push_back(sol.assignments[t].front().gpus);
        }
    }
    return plan;
}

KktReport kkt_check(const WidthPlan& plan, const WorkloadSpec& workload, double budget, double tolerance) {
    require_coverage(plan, workload);
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // Critical multiplier of the segment a -> b: the Lagrangian term
    // (1 + mu k) / s(k) decreases along it iff mu < slope / intercept.
    auto critical = [](const SpeedupPoint& a, const SpeedupPoint& b) {
        const double slope = (b.speedup - a.speedup) / (b.gpus - a.gpus);
        const double intercept = a.speedup - slope * a.gpus;
        return intercept > 0.0 ? slope / intercept : kInf;
    };

    struct Interval {
        std::size_t cls, epoch;
        double lo, hi;
    };
    std::vector<Interval> intervals;
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        for (std::size_t j = 0; j < workload.epoch_count(i); ++j) {
            const auto& hull = workload.hull(i, j);
            const auto v = hull.rising_vertices();
            const double k = plan.widths[i][j];
            const double snap = 1e-9 * std::max(1.0, k);
            Interval iv{i, j, 0.0, kInf};
            if (v.size() == 1) {
                intervals.push_back(iv);
                continue;
            }
            std::size_t seg = v.size() - 1;  // segment index whose right vertex is >= k
            for (std::size_t n = 1; n < v.size(); ++n) {
                if (k <= v[n].gpus + snap) {
                    seg = n;
                    break;
                }
            }
            const bool at_left = std::abs(k - v[seg - 1].gpus) <= snap;
            const bool at_right = std::abs(k - v[seg].gpus) <= snap;
            if (at_left && seg == 1) {
                iv.lo = critical(v[0], v[1]);
            } else if (at_right) {
                iv.hi = critical(v[seg - 1], v[seg]);
                iv.lo = (seg + 1 < v.size()) ? critical(v[seg], v[seg + 1]) : 0.0;
            } else {
                iv.lo = iv.hi = critical(v[seg - 1], v[seg]);
            }
            intervals.push_back(iv);
        }
    }

    KktReport report;
    const double used = boa_cost(plan, workload);
    report.budget_binding = (budget - used) <= 1e-6 * budget;
    double lo = 0.0;
    double hi = kInf;
    for (const auto& iv : intervals) {
        lo = std::max(lo, iv.lo);
        hi = std::min(hi, iv.hi);
    }
    report.multiplier = lo;

    auto flag = [&](const Interval& iv, const char* why) {
        std::ostringstream os;
        os << "(class " << iv.cls << ", epoch " << iv.epoch << ") width " << plan.widths[iv.cls][iv.epoch]
           << " admits multipliers [" << iv.lo << ", " << iv.hi << "]: " << why;
        report.violations.push_back(os.str());
    };

    if (used > budget * (1.0 + 1e-6)) {
        report.violations.push_back("budget exceeded: uses " + std::to_string(used) + " of " +
                                    std::to_string(budget));
    }
    if (lo > hi * (1.0 + tolerance)) {
        for (const auto& iv : intervals) {
            if (iv.lo >= lo) flag(iv, "requires a larger multiplier than other terms allow");
            if (iv.hi <= hi) flag(iv, "requires a smaller multiplier than other terms allow");
        }
    }
    if (!report.budget_binding && lo > 0.0) {
        for (const auto& iv : intervals) {
            if (iv.lo > 0.0) flag(iv, "budget is slack but the width is below saturation");
        }
    }
    report.ok = report.violations.empty();
    return report;
}

}  // namespace boa
