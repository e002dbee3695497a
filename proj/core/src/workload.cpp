#include "boa/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace boa {

namespace {

constexpr double kWeightTol = 1e-6;

void validate_class(const JobClassSpec& c) {
    const std::string where = "class '" + c.class_id + "': ";
    if (!(c.arrival_rate > 0.0) || !std::isfinite(c.arrival_rate)) {
        throw std::invalid_argument(where + "arrival_rate must be positive");
    }
    if (c.epochs.empty()) {
        throw std::invalid_argument(where + "at least one epoch is required");
    }
    if (!(c.rescale_mean >= 0.0) || !std::isfinite(c.rescale_mean)) {
        throw std::invalid_argument(where + "rescale_mean must be non-negative");
    }
    if (c.rescale_dist.kind == SizeDistKind::lognormal) {
        throw std::invalid_argument(where + "rescale_dist must be deterministic or exponential");
    }
    for (const auto& e : c.epochs) {
        if (!(e.mean_size > 0.0) || !std::isfinite(e.mean_size)) {
            throw std::invalid_argument(where + "epoch mean_size must be positive");
        }
        if (e.size_dist.kind == SizeDistKind::lognormal && !(e.size_dist.sigma >= 0.0)) {
            throw std::invalid_argument(where + "lognormal sigma must be non-negative");
        }
        if (e.profile.points().front().speedup != 1.0) {
            throw std::invalid_argument(where + "speedup profiles must be normalized to s(1) = 1");
        }
    }
}

}  // namespace

double SizeDist::sample(double mean, std::mt19937_64& rng) const {
    if (mean <= 0.0) {
        return 0.0;
    }
    switch (kind) {
        case SizeDistKind::deterministic:
            return mean;
        case SizeDistKind::exponential: {
            std::exponential_distribution<double> d(1.0 / mean);
            double x = 0.0;
            do {
                x = d(rng);
            } while (x <= 0.0);
            return x;
        }
        case SizeDistKind::lognormal: {
            std::lognormal_distribution<double> d(std::log(mean) - 0.5 * sigma * sigma, sigma);
            return d(rng);
        }
    }
    return mean;
}

const char* to_string(SizeDistKind kind) {
    switch (kind) {
        case SizeDistKind::deterministic:
            return "deterministic";
        case SizeDistKind::exponential:
            return "exponential";
        case SizeDistKind::lognormal:
            return "lognormal";
    }
    return "deterministic";
}

SizeDistKind size_dist_from_string(const std::string& name) {
    if (name == "deterministic") return SizeDistKind::deterministic;
    if (name == "exponential") return SizeDistKind::exponential;
    if (name == "lognormal") return SizeDistKind::lognormal;
    throw std::invalid_argument("unknown distribution '" + name + "'");
}

WorkloadSpec::WorkloadSpec(std::vector<JobClassSpec> classes) : classes_(std::move(classes)) {
    if (classes_.empty()) {
        throw std::invalid_argument("workload has no job classes");
    }
    for (const auto& c : classes_) {
        validate_class(c);
        total_rate_ += c.arrival_rate;
    }

    const bool any_weight = std::any_of(classes_.begin(), classes_.end(),
                                        [](const auto& c) { return c.mixture_weight.has_value(); });
    double weight_sum = 0.0;
    for (auto& c : classes_) {
        const double derived = c.arrival_rate / total_rate_;
        if (!c.mixture_weight) {
            if (any_weight) {
                throw std::invalid_argument("class '" + c.class_id + "': mixture_weight missing");
            }
            c.mixture_weight = derived;
        } else if (std::abs(*c.mixture_weight - derived) > kWeightTol) {
            throw std::invalid_argument("class '" + c.class_id +
                                        "': mixture_weight disagrees with arrival_rate / total rate");
        }
        weight_sum += *c.mixture_weight;
    }
    if (std::abs(weight_sum - 1.0) > kWeightTol) {
        throw std::invalid_argument("mixture weights must sum to 1");
    }

    hulls_.reserve(classes_.size());
    for (const auto& c : classes_) {
        auto& row = hulls_.emplace_back();
        row.reserve(c.epochs.size());
        for (const auto& e : c.epochs) {
            row.emplace_back(e.profile);
        }
    }
}

WorkloadSpec WorkloadSpec::from_mixture(double total_rate, std::vector<JobClassSpec> classes) {
    if (!(total_rate > 0.0)) {
        throw std::invalid_argument("total arrival rate must be positive");
    }
    double weight_sum = 0.0;
    for (const auto& c : classes) {
        if (!c.mixture_weight || !(*c.mixture_weight > 0.0)) {
            throw std::invalid_argument("class '" + c.class_id + "': positive mixture_weight required");
        }
        weight_sum += *c.mixture_weight;
    }
    // Published percentages need not sum to exactly 1.
    for (auto& c : classes) {
        c.mixture_weight = *c.mixture_weight / weight_sum;
        c.arrival_rate = *c.mixture_weight * total_rate;
    }
    return WorkloadSpec(std::move(classes));
}

std::size_t WorkloadSpec::class_index(const std::string& class_id) const {
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        if (classes_[i].class_id == class_id) {
            return i;
        }
    }
    throw std::out_of_range("unknown class '" + class_id + "'");
}

LoadTable compute_loads(const WorkloadSpec& spec) {
    LoadTable table;
    table.per_epoch.reserve(spec.class_count());
    for (const auto& c : spec.classes()) {
        auto& row = table.per_epoch.emplace_back();
        double class_total = 0.0;
        for (const auto& e : c.epochs) {
            row.push_back(c.arrival_rate * e.mean_size);
            class_total += row.back();
        }
        table.per_class.push_back(class_total);
        table.total += class_total;
    }
    return table;
}

bool check_feasibility(const WorkloadSpec& spec, double budget) {
    return compute_loads(spec).total < budget;
}

}  // namespace boa
