#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace boa {

/// A measured speedup sample: running on `gpus` GPUs is `speedup` times as fast
/// as the base configuration.
struct SpeedupPoint {
    double gpus = 1.0;
    double speedup = 1.0;

    friend bool operator==(const SpeedupPoint&, const SpeedupPoint&) = default;
};

/// Raw speedup measurements for one (class, epoch).
///
/// GPU counts are integral, strictly increasing and start at 1. Speedups are
/// positive. s(k)/k may not exceed s(1): superlinear profiles are rejected.
/// Profiles for heterogeneous GPU types need not satisfy s(1) == 1.
class SpeedupProfile {
public:
    SpeedupProfile() : points_{{1.0, 1.0}} {}
    explicit SpeedupProfile(std::vector<SpeedupPoint> points);

    const std::vector<SpeedupPoint>& points() const noexcept { return points_; }

    friend bool operator==(const SpeedupProfile&, const SpeedupProfile&) = default;

private:
    std::vector<SpeedupPoint> points_;
};

/// Least non-decreasing concave majorant of a SpeedupProfile, constant beyond
/// the saturation width.
class ConcaveHull {
public:
    ConcaveHull() : ConcaveHull(SpeedupProfile{}) {}
    explicit ConcaveHull(const SpeedupProfile& profile);

    /// Vertices of the piecewise-linear function. The last vertex may repeat
    /// the maximum speedup at the largest measured width (flat tail).
    const std::vector<SpeedupPoint>& breakpoints() const noexcept { return breakpoints_; }

    /// Smallest width attaining the maximum speedup. Always integral.
    double saturation_width() const noexcept { return saturation_width_; }
    double max_speedup() const noexcept { return max_speedup_; }
    double base_speedup() const noexcept { return breakpoints_.front().speedup; }

    /// Hull value at `gpus` >= 1. Throws std::domain_error below 1.
    double eval(double gpus) const;

    /// Smallest width whose hull value equals `speedup`, for speedup in
    /// [base_speedup(), max_speedup()]. Throws std::domain_error otherwise.
    double inverse(double speedup) const;

    /// Nearest integer width in [1, saturation_width()], ties rounding down.
    int round(double gpus) const;

    /// Vertices up to and including the saturation vertex. These are the only
    /// widths an optimal fixed-multiplier allocation ever selects.
    std::span<const SpeedupPoint> rising_vertices() const noexcept {
        return {breakpoints_.data(), rising_count_};
    }

    friend bool operator==(const ConcaveHull&, const ConcaveHull&) = default;

private:
    std::vector<SpeedupPoint> breakpoints_;
    std::size_t rising_count_ = 1;
    double saturation_width_ = 1.0;
    double max_speedup_ = 1.0;
};

inline ConcaveHull build_hull(const SpeedupProfile& profile) { return ConcaveHull(profile); }

}  // namespace boa
