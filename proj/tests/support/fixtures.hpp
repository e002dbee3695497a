#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "boa/workload.hpp"
#include "oracles.hpp"

namespace boa::testing {

inline SpeedupProfile profile(std::vector<std::pair<double, double>> pts) {
    std::vector<SpeedupPoint> out;
    for (auto [k, s] : pts) out.push_back({k, s});
    return SpeedupProfile(std::move(out));
}

inline EpochSpec epoch(double mean, SpeedupProfile p, SizeDistKind dist = SizeDistKind::deterministic) {
    EpochSpec e;
    e.mean_size = mean;
    e.size_dist.kind = dist;
    e.profile = std::move(p);
    return e;
}

inline JobClassSpec job_class(std::string id, double rate, std::vector<EpochSpec> epochs, double rescale = 0.0) {
    JobClassSpec c;
    c.class_id = std::move(id);
    c.arrival_rate = rate;
    c.epochs = std::move(epochs);
    c.rescale_mean = rescale;
    return c;
}

inline SpeedupProfile profile_a() { return profile({{1, 1}, {2, 1.8}, {3, 2.4}, {4, 2.8}}); }
inline SpeedupProfile profile_b() { return profile({{1, 1}, {2, 1.5}, {3, 1.8}, {4, 2.0}}); }

/// Two classes, one epoch each, rho_A = rho_B = 1.
inline WorkloadSpec two_class_instance() {
    return WorkloadSpec({job_class("A", 0.01, {epoch(100.0, profile_a())}),
                         job_class("B", 0.01, {epoch(100.0, profile_b())})});
}

/// Random instance with up to 3 classes and 2 epochs per class.
inline WorkloadSpec random_instance(std::uint64_t seed, double rescale = 0.0, int max_width = 8) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> classes(1, 3);
    std::uniform_int_distribution<int> epochs(1, 2);
    std::uniform_real_distribution<double> rate(0.002, 0.02);
    std::uniform_real_distribution<double> size(20.0, 400.0);
    std::vector<JobClassSpec> out;
    const int n = classes(rng);
    for (int i = 0; i < n; ++i) {
        std::vector<EpochSpec> es;
        const int m = epochs(rng);
        for (int j = 0; j < m; ++j) es.push_back(epoch(size(rng), oracle::random_profile(rng, 5, max_width)));
        out.push_back(job_class("c" + std::to_string(i), rate(rng), std::move(es), rescale));
    }
    return WorkloadSpec(std::move(out));
}

}  // namespace boa::testing
