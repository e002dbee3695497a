#include "boa/efficiency_target.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boa {

double efficiency_band(double target) {
    if (!(target > 0.0 && target < 1.0)) {
        throw std::invalid_argument("efficiency target must lie in (0, 1)");
    }
    return std::min(0.3 * (1.0 - target), 0.3 * target);
}

std::vector<int> water_fill(std::span<const ConcaveHull* const> hulls, int gpus) {
    std::vector<int> widths(hulls.size(), 0);
    int left = std::max(gpus, 0);
    for (std::size_t n = 0; n < hulls.size() && left > 0; ++n, --left) {
        widths[n] = 1;
    }
    while (left > 0) {
        std::size_t best = hulls.size();
        double best_gain = 0.0;
        for (std::size_t n = 0; n < hulls.size(); ++n) {
            const int k = widths[n];
            if (k == 0) continue;
            const double gain = hulls[n]->eval(k + 1) - hulls[n]->eval(k);
            if (gain > best_gain) {
                best_gain = gain;
                best = n;
            }
        }
        if (best == hulls.size()) break;
        ++widths[best];
        --left;
    }
    return widths;
}

double cluster_efficiency(std::span<const ConcaveHull* const> hulls, std::span<const int> widths, int cluster_gpus) {
    double total = 0.0;
    for (std::size_t n = 0; n < hulls.size(); ++n) {
        if (widths[n] > 0) total += hulls[n]->eval(widths[n]);
    }
    if (cluster_gpus <= 0) {
        return hulls.empty() ? 0.0 : HUGE_VAL;
    }
    return total / cluster_gpus;
}

ClusterChoice choose_cluster(std::span<const ConcaveHull* const> hulls, double target, int gpus_per_node,
                             std::optional<int> max_gpus) {
    if (hulls.empty()) throw std::invalid_argument("choose_cluster needs at least one job");
    if (gpus_per_node < 1) throw std::invalid_argument("gpus_per_node must be at least 1");
    auto round_up = [&](double g) {
        return static_cast<int>(std::ceil(g / gpus_per_node - 1e-9)) * gpus_per_node;
    };
    double saturation = 0.0;
    for (const auto* h : hulls) saturation += h->saturation_width();
    const int lo = round_up(static_cast<double>(hulls.size()));
    const int hi = std::max(lo, max_gpus ? *max_gpus : round_up(saturation));

    ClusterChoice best;
    double best_gap = HUGE_VAL;
    for (int k = lo; k <= hi; k += gpus_per_node) {
        auto widths = water_fill(hulls, k);
        const double eff = cluster_efficiency(hulls, widths, k);
        const double gap = std::abs(eff - target);
        if (gap < best_gap) {
            best_gap = gap;
            best = {k, std::move(widths), eff};
        }
    }
    return best;
}

}  // namespace boa
