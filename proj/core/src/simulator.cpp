#include "boa/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <queue>
#include <random>
#include <stdexcept>
#include <tuple>

#include "boa/efficiency_target.hpp"

namespace boa {

void SimConfig::validate() const {
    if (gpus_per_node < 1) throw std::invalid_argument("gpus_per_node must be at least 1");
    if (!(provisioning_delay >= 0.0)) throw std::invalid_argument("provisioning_delay must be non-negative");
    if (!(quantum > 0.0)) throw std::invalid_argument("quantum must be positive");
    if (horizon && !(*horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
}

namespace {

// Lower value fires first among events at the same instant.
enum class Ev { rescale_end = 0, epoch_done = 1, arrival = 2, plan_ready = 3, provision_done = 4, refresh_tick = 5,
                quantum = 6 };

struct Event {
    double t = 0.0;
    Ev kind = Ev::arrival;
    std::size_t job = no_job;
    std::uint64_t seq = 0;
    std::uint64_t version = 0;
    std::size_t payload = 0;
};

struct Later {
    bool operator()(const Event& a, const Event& b) const {
        return std::tuple(a.t, static_cast<int>(a.kind), a.job, a.seq) >
               std::tuple(b.t, static_cast<int>(b.kind), b.job, b.seq);
    }
};

enum class Phase { pending, waiting, rescaling, running, done };

struct Job {
    std::size_t cls = 0;
    std::size_t epoch = 0;
    double remaining = 0.0;
    double gpus = 0.0;
    double target = 0.0;  // width awaited while provisioning
    double since = 0.0;   // start of the current running interval
    Phase phase = Phase::pending;
    std::uint64_t version = 0;
    std::size_t rescales = 0;
};

class Engine {
public:
    Engine(const Trace& trace, const Policy& policy, const WorkloadSpec& workload, const SimConfig& config)
        : trace_(trace), workload_(workload), config_(config) {
        if (const auto* fixed = std::get_if<FixedWidthPolicy>(&policy)) {
            fixed_ = fixed;
            plan_ = fixed->plan;
        } else {
            target_ = std::get<EfficiencyTargetPolicy>(policy).target;
            band_ = efficiency_band(target_);
        }
        jobs_.resize(trace.events.size());
        result_.work_done.assign(trace.events.size(), 0.0);
    }

    SimResult run() {
        for (std::size_t n = 0; n < trace_.events.size(); ++n) {
            push(trace_.events[n].arrival_time, Ev::arrival, n);
        }
        if (fixed_ && fixed_->refresh) {
            recompute(0.0);
            push(fixed_->refresh->interval, Ev::refresh_tick, no_job);
        }
        while (!queue_.empty()) {
            const Event e = queue_.top();
            queue_.pop();
            if (config_.horizon && e.t > *config_.horizon) break;
            if (e.job != no_job && e.kind != Ev::arrival && e.version != jobs_[e.job].version) continue;
            dispatch(e);
        }
        result_.metrics = compute_metrics(result_.log, trace_, workload_, config_.horizon);
        return std::move(result_);
    }

private:
    void push(double t, Ev kind, std::size_t job, std::size_t payload = 0) {
        const std::uint64_t version = job == no_job ? 0 : jobs_[job].version;
        queue_.push({t, kind, job, seq_++, version, payload});
    }

    void dispatch(const Event& e) {
        switch (e.kind) {
            case Ev::arrival: on_arrival(e.t, e.job); break;
            case Ev::rescale_end: on_rescale_end(e.t, e.job); break;
            case Ev::epoch_done: on_epoch_done(e.t, e.job); break;
            case Ev::provision_done: start_rescale(e.t, e.job, jobs_[e.job].target); break;
            case Ev::plan_ready: plan_ = pending_plans_.at(e.payload); break;
            case Ev::refresh_tick: on_refresh_tick(e.t); break;
            case Ev::quantum: on_quantum(e.t); break;
        }
    }

    // --- accounting -------------------------------------------------------

    double cluster() const {
        if (!fixed_) return cluster_;
        if (holders_ == 0) return 0.0;
        if (config_.gpus_per_node == 1) return held_;
        const double nodes = std::ceil(held_ / config_.gpus_per_node - 1e-9);
        return nodes * config_.gpus_per_node;
    }

    void set_holding(std::size_t n, double gpus) {
        auto& job = jobs_[n];
        if (job.gpus > 0.0) --holders_;
        if (gpus > 0.0) ++holders_;
        held_ += gpus - job.gpus;
        if (holders_ == 0) held_ = 0.0;
        job.gpus = gpus;
    }

    void log(double t, EventKind kind, std::size_t n) {
        EventRecord r{t, kind, n, 0, 0.0, cluster()};
        if (n != no_job) {
            r.epoch = jobs_[n].epoch;
            r.gpus = jobs_[n].gpus;
        }
        result_.log.push_back(r);
    }

    double speedup(const Job& job) const { return workload_.hull(job.cls, job.epoch).eval(job.gpus); }

    // Credits progress of a running job up to t.
    void settle(double t, std::size_t n) {
        auto& job = jobs_[n];
        if (job.phase != Phase::running) return;
        const double progress = speedup(job) * (t - job.since);
        const double used = std::min(progress, job.remaining);
        job.remaining -= used;
        result_.work_done[n] += used;
        job.since = t;
    }

    double rescale_draw(std::size_t n) {
        auto& job = jobs_[n];
        const auto& draws = trace_.events[n].rescale_draws;
        const std::size_t m = job.rescales++;
        if (m < draws.size()) return draws[m];
        const auto& cls = workload_.classes()[job.cls];
        std::seed_seq seq{config_.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(m)};
        std::mt19937_64 rng(seq);
        return cls.rescale_dist.sample(cls.rescale_mean, rng);
    }

    // --- job lifecycle ----------------------------------------------------

    // Moves a job to `gpus`, waiting for provisioning first if it needs more
    // GPUs than it holds.
    void request_width(double t, std::size_t n, double gpus) {
        auto& job = jobs_[n];
        if (config_.provisioning_delay > 0.0 && gpus > job.gpus) {
            settle(t, n);
            ++job.version;
            set_holding(n, 0.0);
            job.phase = Phase::waiting;
            job.target = gpus;
            ++result_.counters.queue_events;
            log(t, EventKind::wait, n);
            push(t + config_.provisioning_delay, Ev::provision_done, n);
            return;
        }
        start_rescale(t, n, gpus);
    }

    void start_rescale(double t, std::size_t n, double gpus) {
        auto& job = jobs_[n];
        settle(t, n);
        ++job.version;
        set_holding(n, gpus);
        job.phase = Phase::rescaling;
        job.target = gpus;
        ++result_.counters.rescales;
        log(t, EventKind::rescale_start, n);
        push(t + rescale_draw(n), Ev::rescale_end, n);
    }

    void on_rescale_end(double t, std::size_t n) {
        auto& job = jobs_[n];
        job.phase = Phase::running;
        job.since = t;
        log(t, EventKind::rescale_end, n);
        schedule_epoch_end(t, n);
    }

    void schedule_epoch_end(double t, std::size_t n) {
        const auto& job = jobs_[n];
        push(t + job.remaining / speedup(job), Ev::epoch_done, n);
    }

    void on_arrival(double t, std::size_t n) {
        auto& job = jobs_[n];
        const auto& ev = trace_.events[n];
        job.cls = ev.class_index;
        job.epoch = 0;
        job.remaining = ev.epoch_sizes.front();
        ++active_;
        log(t, EventKind::arrive, n);
        if (fixed_) {
            place_fixed(t, n);
            return;
        }
        job.phase = Phase::waiting;
        ++result_.counters.queue_events;
        log(t, EventKind::wait, n);
        if (!tick_scheduled_) {
            tick_scheduled_ = true;
            push(std::ceil(t / config_.quantum) * config_.quantum, Ev::quantum, no_job);
        }
    }

    void on_epoch_done(double t, std::size_t n) {
        auto& job = jobs_[n];
        result_.work_done[n] += job.remaining;
        job.remaining = 0.0;
        ++job.epoch;
        const auto& sizes = trace_.events[n].epoch_sizes;
        if (job.epoch == sizes.size()) {
            ++job.version;
            job.phase = Phase::done;
            set_holding(n, 0.0);
            --active_;
            const bool drain = !fixed_ && active_ == 0 && cluster_ != 0.0;
            if (drain) cluster_ = 0.0;
            log(t, EventKind::complete, n);
            if (drain) log(t, EventKind::cluster_resize, no_job);
            return;
        }
        job.remaining = sizes[job.epoch];
        job.since = t;
        log(t, EventKind::epoch_done, n);
        if (fixed_) {
            place_fixed(t, n);
        } else {
            schedule_epoch_end(t, n);
        }
    }

    // --- fixed-width policy -------------------------------------------------

    void place_fixed(double t, std::size_t n) {
        auto& job = jobs_[n];
        const double planned = plan_.width(job.cls, job.epoch);
        if (planned != job.gpus || job.phase == Phase::pending) {
            request_width(t, n, planned);
        } else {
            schedule_epoch_end(t, n);
        }
        const double holding = job.phase == Phase::waiting ? job.target : job.gpus;
        if (holding != planned) ++result_.counters.width_deviations;
    }

    void recompute(double t) {
        ++result_.counters.plan_computations;
        auto plan = fixed_->refresh->compute(t);
        require_coverage(plan, workload_);
        if (fixed_->refresh->compute_latency > 0.0) {
            pending_plans_.push_back(std::move(plan));
            push(t + fixed_->refresh->compute_latency, Ev::plan_ready, no_job, pending_plans_.size() - 1);
        } else {
            plan_ = std::move(plan);
        }
    }

    void on_refresh_tick(double t) {
        if (arrived_all(t) && active_ == 0) return;
        recompute(t);
        push(t + fixed_->refresh->interval, Ev::refresh_tick, no_job);
    }

    bool arrived_all(double t) const {
        return trace_.events.empty() || trace_.events.back().arrival_time <= t;
    }

    // --- efficiency-target policy -----------------------------------------

    void on_quantum(double t) {
        std::vector<std::size_t> active;
        for (std::size_t n = 0; n < jobs_.size(); ++n) {
            const auto p = jobs_[n].phase;
            if (p != Phase::pending && p != Phase::done) active.push_back(n);
        }
        if (active.empty()) {
            tick_scheduled_ = false;
            if (cluster_ != 0.0) {
                cluster_ = 0.0;
                log(t, EventKind::cluster_resize, no_job);
            }
            return;
        }

        std::vector<const ConcaveHull*> hulls;
        std::vector<int> current;
        for (auto n : active) {
            hulls.push_back(&workload_.hull(jobs_[n].cls, jobs_[n].epoch));
            current.push_back(static_cast<int>(jobs_[n].gpus));
        }
        const int k_now = static_cast<int>(cluster_);
        const double eff = cluster_efficiency(hulls, current, k_now);
        std::vector<int> widths;
        int k_next = k_now;
        if (eff > target_ + band_ || eff < target_ - band_) {
            auto choice = choose_cluster(hulls, target_, config_.gpus_per_node);
            k_next = choice.cluster_gpus;
            widths = std::move(choice.widths);
        } else {
            widths = water_fill(hulls, k_now);
        }
        if (k_next != k_now) {
            cluster_ = k_next;
            log(t, EventKind::cluster_resize, no_job);
        }

        for (std::size_t a = 0; a < active.size(); ++a) {
            const std::size_t n = active[a];
            auto& job = jobs_[n];
            const double w = widths[a];
            if (w == 0.0) {
                if (job.phase != Phase::waiting) {
                    settle(t, n);
                    ++job.version;
                    set_holding(n, 0.0);
                    job.phase = Phase::waiting;
                    job.target = 0.0;
                    ++result_.counters.queue_events;
                    log(t, EventKind::wait, n);
                }
                continue;
            }
            const double holding = job.phase == Phase::waiting ? job.target : job.gpus;
            if (holding != w) request_width(t, n, w);
        }
        push(t + config_.quantum, Ev::quantum, no_job);
    }

    const Trace& trace_;
    const WorkloadSpec& workload_;
    const SimConfig& config_;
    const FixedWidthPolicy* fixed_ = nullptr;
    WidthPlan plan_;
    std::vector<WidthPlan> pending_plans_;
    double target_ = 0.0;
    double band_ = 0.0;

    std::vector<Job> jobs_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t seq_ = 0;
    double held_ = 0.0;
    std::size_t holders_ = 0;
    std::size_t active_ = 0;
    double cluster_ = 0.0;
    bool tick_scheduled_ = false;
    SimResult result_;
};

}  // namespace

SimResult simulate(const Trace& trace, const Policy& policy, const WorkloadSpec& workload, const SimConfig& config) {
    config.validate();
    validate_trace(trace, workload);
    if (const auto* fixed = std::get_if<FixedWidthPolicy>(&policy)) {
        require_coverage(fixed->plan, workload);
        if (fixed->refresh && !(fixed->refresh->interval > 0.0)) {
            throw std::invalid_argument("recompute interval must be positive");
        }
    } else {
        efficiency_band(std::get<EfficiencyTargetPolicy>(policy).target);
    }
    return Engine(trace, policy, workload, config).run();
}

std::vector<ComparisonRow> compare(const Trace& trace, const WorkloadSpec& workload,
                                   const std::vector<NamedPolicy>& policies, const SimConfig& config) {
    if (policies.size() < 2) throw std::invalid_argument("compare needs at least two policies");
    std::vector<std::future<SimMetrics>> runs;
    for (const auto& p : policies) {
        runs.push_back(std::async(std::launch::async, [&trace, &workload, &config, &p] {
            return simulate(trace, p.policy, workload, config).metrics;
        }));
    }
    std::vector<ComparisonRow> rows;
    for (std::size_t n = 0; n < policies.size(); ++n) {
        const auto m = runs[n].get();
        rows.push_back({policies[n].name, policies[n].parameter, m.mean_jct, m.p95_jct, m.time_avg_usage});
    }
    return rows;
}

}  // namespace boa
