#include "boa/speedup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace boa {

namespace {

constexpr double kRelTol = 1e-12;

// Cross product of (a - o) x (b - o). Non-negative means b does not turn
// clockwise from the o->a direction, so `a` is not an upper-hull vertex.
double cross(const SpeedupPoint& o, const SpeedupPoint& a, const SpeedupPoint& b) {
    return (a.gpus - o.gpus) * (b.speedup - o.speedup) - (a.speedup - o.speedup) * (b.gpus - o.gpus);
}

}  // namespace

SpeedupProfile::SpeedupProfile(std::vector<SpeedupPoint> points) : points_(std::move(points)) {
    if (points_.empty()) {
        throw std::invalid_argument("speedup profile has no points");
    }
    if (points_.front().gpus != 1.0) {
        throw std::invalid_argument("speedup profile must start at 1 GPU");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!std::isfinite(p.gpus) || p.gpus != std::floor(p.gpus)) {
            throw std::invalid_argument("speedup profile GPU counts must be integers");
        }
        if (!std::isfinite(p.speedup) || p.speedup <= 0.0) {
            throw std::invalid_argument("speedup values must be positive and finite");
        }
        if (i > 0 && p.gpus <= points_[i - 1].gpus) {
            throw std::invalid_argument("speedup profile GPU counts must be strictly increasing");
        }
        const double base = points_.front().speedup;
        if (p.speedup / p.gpus > base * (1.0 + kRelTol)) {
            throw std::invalid_argument("superlinear speedup at " + std::to_string(p.gpus) +
                                        " GPUs: s(k)/k exceeds s(1)");
        }
    }
}

ConcaveHull::ConcaveHull(const SpeedupProfile& profile) {
    const auto& pts = profile.points();

    // Upper hull, left to right (points are already sorted by GPU count).
    std::vector<SpeedupPoint> upper;
    upper.reserve(pts.size());
    for (const auto& p : pts) {
        while (upper.size() >= 2 && cross(upper[upper.size() - 2], upper.back(), p) >= 0.0) {
            upper.pop_back();
        }
        upper.push_back(p);
    }

    // The upper hull rises to its maximum and then falls; flatten the fall.
    auto peak = std::max_element(upper.begin(), upper.end(),
                                 [](const auto& a, const auto& b) { return a.speedup < b.speedup; });
    breakpoints_.assign(upper.begin(), peak + 1);
    rising_count_ = breakpoints_.size();
    saturation_width_ = peak->gpus;
    max_speedup_ = peak->speedup;
    if (pts.back().gpus > saturation_width_) {
        breakpoints_.push_back({pts.back().gpus, max_speedup_});
    }
}

double ConcaveHull::eval(double gpus) const {
    if (!(gpus >= 1.0)) {
        throw std::domain_error("speedup evaluated below 1 GPU");
    }
    if (gpus >= saturation_width_) {
        return max_speedup_;
    }
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.begin() + rising_count_, gpus,
                               [](double k, const SpeedupPoint& p) { return k < p.gpus; });
    // `it` is the first vertex strictly right of `gpus`; gpus < saturation so it exists.
    const auto& b = *it;
    const auto& a = *(it - 1);
    return a.speedup + (gpus - a.gpus) * (b.speedup - a.speedup) / (b.gpus - a.gpus);
}

double ConcaveHull::inverse(double speedup) const {
    const double lo = base_speedup();
    if (!(speedup >= lo * (1.0 - kRelTol)) || !(speedup <= max_speedup_ * (1.0 + kRelTol))) {
        throw std::domain_error("speedup target outside the hull's range");
    }
    if (speedup <= lo) {
        return 1.0;
    }
    if (speedup >= max_speedup_) {
        return saturation_width_;
    }
    for (std::size_t i = 1; i < rising_count_; ++i) {
        const auto& a = breakpoints_[i - 1];
        const auto& b = breakpoints_[i];
        if (speedup <= b.speedup) {
            return a.gpus + (speedup - a.speedup) * (b.gpus - a.gpus) / (b.speedup - a.speedup);
        }
    }
    return saturation_width_;
}

int ConcaveHull::round(double gpus) const {
    if (!(gpus >= 1.0)) {
        throw std::domain_error("cannot round a width below 1 GPU");
    }
    if (gpus >= saturation_width_) {
        return static_cast<int>(saturation_width_);
    }
    const double whole = std::floor(gpus);
    const double rounded = (gpus - whole > 0.5) ? whole + 1.0 : whole;
    return static_cast<int>(std::clamp(rounded, 1.0, saturation_width_));
}

}  // namespace boa
