#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "boa/trace.hpp"
#include "boa/workload.hpp"

namespace boa {

enum class EventKind { arrive, wait, rescale_start, rescale_end, epoch_done, complete, cluster_resize };

const char* to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& name);

inline constexpr std::size_t no_job = std::numeric_limits<std::size_t>::max();

/// One simulator log line. `gpus` is the job's holding after the event and
/// `epoch` the epoch it is in after the event; both are unused (no_job, 0) for
/// cluster_resize. `cluster_gpus` is the rented cluster size after the event.
struct EventRecord {
    double t = 0.0;
    EventKind kind = EventKind::arrive;
    std::size_t job = no_job;
    std::size_t epoch = 0;
    double gpus = 0.0;
    double cluster_gpus = 0.0;

    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

using EventLog = std::vector<EventRecord>;

struct JobMetrics {
    std::size_t job_id = 0;
    std::size_t class_index = 0;
    double arrival = 0.0;
    double jct = 0.0;
    double gpu_seconds = 0.0;
};

struct SimMetrics {
    std::size_t completed = 0;
    std::size_t unfinished = 0;  // arrived but not completed by the horizon
    double mean_jct = 0.0;
    double p95_jct = 0.0;
    double horizon = 0.0;                // end of the integration window
    double time_avg_usage = 0.0;         // integral of K(s) over the window / horizon
    double idle_gpu_seconds = 0.0;       // rented but not held by any job
    std::vector<std::pair<double, double>> usage_series;       // (t, K) step function
    std::vector<std::pair<double, double>> efficiency_series;  // (t, sum of speedups / K)
    std::vector<JobMetrics> jobs;        // completed jobs in id order
    std::vector<double> per_job_gpu_hours;
    double interarrival_c2 = 0.0;
};

/// Rebuilds every metric from an event log. The window ends at `horizon` when
/// given, otherwise at the last logged event. P95 uses nearest rank
/// (rank = ceil(0.95 n) in the sorted JCTs). Throws std::runtime_error when no
/// job completed.
SimMetrics compute_metrics(const EventLog& log, const Trace& trace, const WorkloadSpec& workload,
                           std::optional<double> horizon = std::nullopt);

/// Nearest-rank percentile, p in (0, 1].
double nearest_rank(std::vector<double> values, double p);

/// One JSON object per line: {t, event, job, epoch, k, cluster_gpus}.
void write_event_log(std::ostream& out, const EventLog& log);
EventLog read_event_log(std::istream& in);

/// CSV with header job_id,class,arrival,jct,gpu_hours.
void write_jobs_csv(std::ostream& out, const SimMetrics& metrics, const WorkloadSpec& workload);

}  // namespace boa
