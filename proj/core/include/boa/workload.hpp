#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "boa/speedup.hpp"

namespace boa {

enum class SizeDistKind { deterministic, exponential, lognormal };

/// Distribution of a positive quantity parameterized by its mean.
struct SizeDist {
    SizeDistKind kind = SizeDistKind::deterministic;
    double sigma = 0.0;  // lognormal shape only

    /// One positive draw with the given mean (a zero mean always yields 0).
    double sample(double mean, std::mt19937_64& rng) const;

    friend bool operator==(const SizeDist&, const SizeDist&) = default;
};

const char* to_string(SizeDistKind kind);
SizeDistKind size_dist_from_string(const std::string& name);

/// One statistical epoch of a job class. Work is in GPU-seconds at width 1.
struct EpochSpec {
    double mean_size = 1.0;
    SizeDist size_dist{};
    SpeedupProfile profile{};
};

struct JobClassSpec {
    std::string class_id;
    double arrival_rate = 0.0;  // jobs per second
    std::vector<EpochSpec> epochs;
    double rescale_mean = 0.0;  // seconds
    SizeDist rescale_dist{};    // deterministic or exponential
    /// Fraction of arrivals belonging to this class. Derived from the rates
    /// when left unset.
    std::optional<double> mixture_weight;
};

/// Per-epoch loads rho_ij = lambda_i * E[X_ij] and their class totals.
struct LoadTable {
    std::vector<std::vector<double>> per_epoch;
    std::vector<double> per_class;
    double total = 0.0;
};

/// Validated, immutable description of the job mix. Hulls are built once at
/// construction.
class WorkloadSpec {
public:
    explicit WorkloadSpec(std::vector<JobClassSpec> classes);

    /// Builds a spec whose per-class rates are weight * total_rate, after
    /// scaling the weights to sum to 1.
    static WorkloadSpec from_mixture(double total_rate, std::vector<JobClassSpec> classes);

    const std::vector<JobClassSpec>& classes() const noexcept { return classes_; }
    std::size_t class_count() const noexcept { return classes_.size(); }
    std::size_t epoch_count(std::size_t cls) const { return classes_.at(cls).epochs.size(); }
    double total_rate() const noexcept { return total_rate_; }
    double mixture_weight(std::size_t cls) const { return *classes_.at(cls).mixture_weight; }

    const ConcaveHull& hull(std::size_t cls, std::size_t epoch) const { return hulls_.at(cls).at(epoch); }
    const std::vector<std::vector<ConcaveHull>>& hulls() const noexcept { return hulls_; }

    /// Index of the class with the given id; throws std::out_of_range.
    std::size_t class_index(const std::string& class_id) const;

private:
    std::vector<JobClassSpec> classes_;
    std::vector<std::vector<ConcaveHull>> hulls_;
    double total_rate_ = 0.0;
};

LoadTable compute_loads(const WorkloadSpec& spec);

/// True iff the budget strictly exceeds the total load.
bool check_feasibility(const WorkloadSpec& spec, double budget);

}  // namespace boa
