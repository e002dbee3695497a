#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "boa/arrival.hpp"
#include "boa/workload.hpp"

namespace boa {

/// One arriving job with every stochastic quantity pre-drawn.
struct TraceEvent {
    double arrival_time = 0.0;
    std::size_t class_index = 0;
    std::vector<double> epoch_sizes;    // GPU-seconds, one per epoch
    std::vector<double> rescale_draws;  // seconds, one per epoch boundary incl. first placement

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Trace {
    std::vector<TraceEvent> events;

    friend bool operator==(const Trace&, const Trace&) = default;
};

/// Generates `n_jobs` arrivals. Classes are drawn by mixture weight; sizes and
/// rescale durations are drawn from the per-class distributions. A pure
/// function of its arguments.
Trace gen_trace(const WorkloadSpec& spec, const ArrivalModel& model, std::size_t n_jobs,
                std::uint64_t seed);

/// Checks arrival ordering and per-class vector lengths against `spec`.
void validate_trace(const Trace& trace, const WorkloadSpec& spec);

/// Empirical squared coefficient of variation of interarrival times
/// (the first arrival is measured from t = 0). Zero when fewer than two gaps.
double empirical_interarrival_c2(const Trace& trace);

void write_trace(std::ostream& out, const Trace& trace);
void write_trace(const std::filesystem::path& path, const Trace& trace);

/// Throws ParseError naming the line and field on malformed input.
Trace read_trace(std::istream& in);
Trace read_trace(const std::filesystem::path& path);

}  // namespace boa
