#include "boa/arrival.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace boa {

ArrivalModel ArrivalModel::poisson(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("Poisson rate must be positive");
    }
    ArrivalModel m;
    m.kind_ = ArrivalKind::poisson;
    m.high_rate_ = rate;
    m.low_rate_ = rate;
    return m;
}

ArrivalModel ArrivalModel::two_rate(double high_rate, double low_rate, double mean_high_duration,
                                    double mean_low_duration) {
    if (!(low_rate >= 0.0) || !(high_rate > low_rate)) {
        throw std::invalid_argument("two-rate model needs high_rate > low_rate >= 0");
    }
    if (!(mean_high_duration > 0.0) || !(mean_low_duration > 0.0)) {
        throw std::invalid_argument("two-rate phase durations must be positive");
    }
    ArrivalModel m;
    m.kind_ = ArrivalKind::two_rate_bursty;
    m.high_rate_ = high_rate;
    m.low_rate_ = low_rate;
    m.mean_high_ = mean_high_duration;
    m.mean_low_ = mean_low_duration;
    return m;
}

ArrivalModel ArrivalModel::calibrated(double total_rate, double target_c2, double low_ratio,
                                      double high_fraction) {
    if (!(target_c2 >= 1.0)) {
        throw std::invalid_argument("interarrival C^2 below 1 is not reachable by a two-rate model");
    }
    if (target_c2 == 1.0) {
        return poisson(total_rate);
    }
    if (!(low_ratio >= 0.0 && low_ratio < 1.0) || !(high_fraction > 0.0 && high_fraction < 1.0)) {
        throw std::invalid_argument("calibration needs 0 <= low_ratio < 1 and 0 < high_fraction < 1");
    }
    const double low = low_ratio * total_rate;
    const double high = (total_rate - low * (1.0 - high_fraction)) / high_fraction;
    auto at_cycle = [&](double cycle) {
        return two_rate(high, low, high_fraction * cycle, (1.0 - high_fraction) * cycle);
    };

    // C^2 grows monotonically with the cycle length, from 1 (fast switching)
    // to the mixture-of-exponentials limit (slow switching).
    double lo = std::log(1e-6 / total_rate);
    double hi = std::log(1e12 / total_rate);
    if (at_cycle(std::exp(hi)).interarrival_c2() < target_c2) {
        throw std::invalid_argument("target C^2 " + std::to_string(target_c2) +
                                    " exceeds what this rate split can produce");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (at_cycle(std::exp(mid)).interarrival_c2() < target_c2) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return at_cycle(std::exp(0.5 * (lo + hi)));
}

double ArrivalModel::long_run_rate() const noexcept {
    if (kind_ == ArrivalKind::poisson) {
        return high_rate_;
    }
    return (high_rate_ * mean_high_ + low_rate_ * mean_low_) / (mean_high_ + mean_low_);
}

double ArrivalModel::interarrival_c2() const {
    if (kind_ == ArrivalKind::poisson) {
        return 1.0;
    }
    // Interarrival times of a stationary MMPP are phase-type with initial
    // vector phi = pi * D1 / lambda and sub-generator D0. Moments follow from
    // M = (-D0)^{-1}: E[T] = phi M 1, E[T^2] = 2 phi M^2 1.
    const double leave_high = 1.0 / mean_high_;
    const double leave_low = 1.0 / mean_low_;
    const double a11 = high_rate_ + leave_high;
    const double a12 = -leave_high;
    const double a21 = -leave_low;
    const double a22 = low_rate_ + leave_low;
    const double det = a11 * a22 - a12 * a21;
    const double m11 = a22 / det;
    const double m12 = -a12 / det;
    const double m21 = -a21 / det;
    const double m22 = a11 / det;

    const double pi_high = mean_high_ / (mean_high_ + mean_low_);
    const double rate = long_run_rate();
    const double phi1 = pi_high * high_rate_ / rate;
    const double phi2 = (1.0 - pi_high) * low_rate_ / rate;

    const double r1 = m11 + m12;  // M 1
    const double r2 = m21 + m22;
    const double mean = phi1 * r1 + phi2 * r2;
    const double q1 = m11 * r1 + m12 * r2;  // M^2 1
    const double q2 = m21 * r1 + m22 * r2;
    const double second = 2.0 * (phi1 * q1 + phi2 * q2);
    return second / (mean * mean) - 1.0;
}

ArrivalModel::Sampler::Sampler(const ArrivalModel& model, std::mt19937_64& rng)
    : model_(&model), rng_(&rng) {
    if (model.kind_ == ArrivalKind::two_rate_bursty) {
        const double pi_high = model.mean_high_ / (model.mean_high_ + model.mean_low_);
        high_ = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < pi_high;
        const double mean = high_ ? model.mean_high_ : model.mean_low_;
        phase_end_ = std::exponential_distribution<double>(1.0 / mean)(rng);
    }
}

double ArrivalModel::Sampler::next() {
    const auto& m = *model_;
    if (m.kind_ == ArrivalKind::poisson) {
        now_ += std::exponential_distribution<double>(m.high_rate_)(*rng_);
        return now_;
    }
    for (;;) {
        const double rate = high_ ? m.high_rate_ : m.low_rate_;
        if (rate > 0.0) {
            const double candidate = now_ + std::exponential_distribution<double>(rate)(*rng_);
            if (candidate <= phase_end_) {
                now_ = candidate;
                return now_;
            }
        }
        // Memoryless: restart the arrival clock at the phase switch.
        now_ = phase_end_;
        high_ = !high_;
        const double mean = high_ ? m.mean_high_ : m.mean_low_;
        phase_end_ = now_ + std::exponential_distribution<double>(1.0 / mean)(*rng_);
    }
}

}  // namespace boa
