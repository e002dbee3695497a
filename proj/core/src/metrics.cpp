#include "boa/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "boa/errors.hpp"

namespace boa {

namespace {

constexpr std::array<const char*, 7> kEventNames{"arrive",   "wait",     "rescale_start", "rescale_end",
                                                 "epoch_done", "complete", "cluster_resize"};

}  // namespace

const char* to_string(EventKind kind) { return kEventNames[static_cast<std::size_t>(kind)]; }

EventKind event_kind_from_string(const std::string& name) {
    for (std::size_t n = 0; n < kEventNames.size(); ++n) {
        if (name == kEventNames[n]) return static_cast<EventKind>(n);
    }
    throw std::invalid_argument("unknown event kind '" + name + "'");
}

double nearest_rank(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("percentile must lie in (0, 1]");
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(values.size()) - 1e-9));
    return values[std::max<std::size_t>(rank, 1) - 1];
}

SimMetrics compute_metrics(const EventLog& log, const Trace& trace, const WorkloadSpec& workload,
                           std::optional<double> horizon) {
    SimMetrics m;
    const std::size_t n_jobs = trace.events.size();
    std::vector<double> arrival(n_jobs, -1.0);
    std::vector<double> completion(n_jobs, -1.0);
    std::vector<double> holding(n_jobs, 0.0);
    std::vector<double> since(n_jobs, 0.0);
    std::vector<double> gpu_seconds(n_jobs, 0.0);
    std::vector<double> contribution(n_jobs, 0.0);

    const double end = horizon ? *horizon : (log.empty() ? 0.0 : log.back().t);
    m.horizon = end;

    double cluster = 0.0;
    double last_t = 0.0;
    double rented = 0.0;  // integral of K
    double held = 0.0;    // integral of sum of holdings
    double held_now = 0.0;
    double speed_now = 0.0;
    m.usage_series.emplace_back(0.0, 0.0);

    auto advance = [&](double t) {
        const double until = std::min(t, end);
        if (until > last_t) {
            rented += cluster * (until - last_t);
            held += held_now * (until - last_t);
            last_t = until;
        }
    };

    for (const auto& r : log) {
        if (r.t > end) break;
        advance(r.t);
        if (r.job != no_job) {
            if (r.job >= n_jobs) throw std::invalid_argument("event log names a job outside the trace");
            const std::size_t n = r.job;
            gpu_seconds[n] += holding[n] * (r.t - since[n]);
            since[n] = r.t;
            held_now += r.gpus - holding[n];
            holding[n] = r.gpus;
            if (r.kind == EventKind::arrive) arrival[n] = r.t;
            if (r.kind == EventKind::complete) completion[n] = r.t;
            speed_now -= contribution[n];
            const auto& cls = trace.events[n].class_index;
            const std::size_t epoch = std::min(r.epoch, workload.epoch_count(cls) - 1);
            contribution[n] = r.gpus > 0.0 ? workload.hull(cls, epoch).eval(r.gpus) : 0.0;
            speed_now += contribution[n];
        }
        if (r.cluster_gpus != cluster) {
            cluster = r.cluster_gpus;
            if (m.usage_series.back().first == r.t) {
                m.usage_series.back().second = cluster;
            } else {
                m.usage_series.emplace_back(r.t, cluster);
            }
        }
        if (cluster > 0.0) {
            if (!m.efficiency_series.empty() && m.efficiency_series.back().first == r.t) {
                m.efficiency_series.back().second = speed_now / cluster;
            } else {
                m.efficiency_series.emplace_back(r.t, speed_now / cluster);
            }
        }
    }
    advance(end);

    for (std::size_t n = 0; n < n_jobs; ++n) {
        if (arrival[n] < 0.0) continue;
        if (completion[n] < 0.0) {
            gpu_seconds[n] += holding[n] * (end - std::min(since[n], end));
            ++m.unfinished;
            continue;
        }
        m.jobs.push_back({n, trace.events[n].class_index, arrival[n], completion[n] - arrival[n], gpu_seconds[n]});
        m.per_job_gpu_hours.push_back(gpu_seconds[n] / 3600.0);
    }
    m.completed = m.jobs.size();
    if (m.completed == 0) throw std::runtime_error("no job completed within the simulated window");

    std::vector<double> jcts;
    double total = 0.0;
    for (const auto& j : m.jobs) {
        jcts.push_back(j.jct);
        total += j.jct;
    }
    m.mean_jct = total / static_cast<double>(m.completed);
    m.p95_jct = nearest_rank(std::move(jcts), 0.95);
    m.time_avg_usage = end > 0.0 ? rented / end : 0.0;
    m.idle_gpu_seconds = rented - held;
    m.interarrival_c2 = empirical_interarrival_c2(trace);
    return m;
}

void write_event_log(std::ostream& out, const EventLog& log) {
    for (const auto& r : log) {
        nlohmann::json line;
        line["t"] = r.t;
        line["event"] = to_string(r.kind);
        if (r.job == no_job) {
            line["job"] = nullptr;
        } else {
            line["job"] = r.job;
            line["epoch"] = r.epoch;
            line["k"] = r.gpus;
        }
        line["cluster_gpus"] = r.cluster_gpus;
        out << line.dump() << '\n';
    }
}

EventLog read_event_log(std::istream& in) {
    EventLog log;
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        if (text.empty()) continue;
        nlohmann::json line;
        try {
            line = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(line_no, "<record>", e.what());
        }
        auto number = [&](const char* key) {
            if (!line.contains(key) || !line[key].is_number()) throw ParseError(line_no, key, "expected a number");
            return line[key].get<double>();
        };
        EventRecord r;
        r.t = number("t");
        if (!line.contains("event") || !line["event"].is_string()) {
            throw ParseError(line_no, "event", "expected a string");
        }
        try {
            r.kind = event_kind_from_string(line["event"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, "event", e.what());
        }
        if (line.contains("job") && !line["job"].is_null()) {
            if (!line["job"].is_number_unsigned()) throw ParseError(line_no, "job", "expected an index or null");
            r.job = line["job"].get<std::size_t>();
            r.epoch = static_cast<std::size_t>(number("epoch"));
            r.gpus = number("k");
        }
        r.cluster_gpus = number("cluster_gpus");
        log.push_back(r);
    }
    return log;
}

void write_jobs_csv(std::ostream& out, const SimMetrics& metrics, const WorkloadSpec& workload) {
    out << "job_id,class,arrival,jct,gpu_hours\n";
    out << std::setprecision(10);
    for (const auto& j : metrics.jobs) {
        out << j.job_id << ',' << workload.classes().at(j.class_index).class_id << ',' << j.arrival << ','
            << j.jct << ',' << j.gpu_seconds / 3600.0 << '\n';
    }
}

}  // namespace boa
