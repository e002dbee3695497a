#pragma once

#include <random>

namespace boa {

enum class ArrivalKind { poisson, two_rate_bursty };

/// Arrival process: homogeneous Poisson, or a two-phase Markov-modulated
/// Poisson process alternating between a high and a low rate with
/// exponentially distributed phase lengths.
class ArrivalModel {
public:
    static ArrivalModel poisson(double rate);

    /// Explicit two-rate parameters. Phase means are in seconds.
    static ArrivalModel two_rate(double high_rate, double low_rate, double mean_high_duration,
                                 double mean_low_duration);

    /// Two-rate model with long-run rate `total_rate` whose interarrival
    /// squared coefficient of variation equals `target_c2`.
    ///
    /// The low phase runs at `low_ratio * total_rate`, the high phase occupies
    /// `high_fraction` of time, and the cycle length is solved for. A target of
    /// exactly 1 degenerates to Poisson. Throws std::invalid_argument when the
    /// target exceeds what the rate split can produce.
    static ArrivalModel calibrated(double total_rate, double target_c2, double low_ratio = 0.1,
                                   double high_fraction = 0.1);

    ArrivalKind kind() const noexcept { return kind_; }
    double high_rate() const noexcept { return high_rate_; }
    double low_rate() const noexcept { return low_rate_; }
    double mean_high_duration() const noexcept { return mean_high_; }
    double mean_low_duration() const noexcept { return mean_low_; }

    double long_run_rate() const noexcept;

    /// Closed-form squared coefficient of variation of stationary interarrival times.
    double interarrival_c2() const;

    /// Stateful sampler of successive arrival times starting from t = 0.
    class Sampler {
    public:
        Sampler(const ArrivalModel& model, std::mt19937_64& rng);
        double next();

    private:
        const ArrivalModel* model_;
        std::mt19937_64* rng_;
        double now_ = 0.0;
        bool high_ = false;
        double phase_end_ = 0.0;
    };

private:
    ArrivalKind kind_ = ArrivalKind::poisson;
    double high_rate_ = 1.0;  // poisson: the rate
    double low_rate_ = 1.0;
    double mean_high_ = 0.0;
    double mean_low_ = 0.0;
};

}  // namespace boa
