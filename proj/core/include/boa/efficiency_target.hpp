#pragma once

#include <optional>
#include <span>
#include <vector>

#include "boa/speedup.hpp"

namespace boa {

/// Half-width of the tolerated efficiency band around target c:
/// min(0.3 * (1 - c), 0.3 * c). Throws std::invalid_argument unless 0 < c < 1.
double efficiency_band(double target);

/// Greedy allocation of `gpus` GPUs: every job first gets one (in order, while
/// GPUs last), then each remaining GPU goes to the job with the largest
/// marginal hull gain, ties to the lower index. GPUs with zero gain everywhere
/// stay idle.
std::vector<int> water_fill(std::span<const ConcaveHull* const> hulls, int gpus);

/// Sum of hull speedups at the given widths over the cluster size.
double cluster_efficiency(std::span<const ConcaveHull* const> hulls, std::span<const int> widths, int cluster_gpus);

struct ClusterChoice {
    int cluster_gpus = 0;
    std::vector<int> widths;
    double efficiency = 0.0;
};

/// Searches cluster sizes in whole nodes from max(n, 1) up to `max_gpus`
/// (default: total saturation width rounded up to whole nodes) and returns the
/// water-filled allocation whose efficiency is closest to `target`, ties to the
/// smaller cluster. Requires at least one job.
ClusterChoice choose_cluster(std::span<const ConcaveHull* const> hulls, double target, int gpus_per_node,
                             std::optional<int> max_gpus = std::nullopt);

}  // namespace boa
