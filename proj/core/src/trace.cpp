#include "boa/trace.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "boa/errors.hpp"
#include "json.hpp"

namespace boa {

using nlohmann::json;

namespace {

constexpr const char* kTraceFormat = "boa-trace";
constexpr int kTraceVersion = 1;

double require_number(const json& rec, const char* field, std::size_t line) {
    auto it = rec.find(field);
    if (it == rec.end()) {
        throw ParseError(line, field, "missing");
    }
    if (!it->is_number()) {
        throw ParseError(line, field, "expected a number");
    }
    return it->get<double>();
}

std::vector<double> require_numbers(const json& rec, const char* field, std::size_t line) {
    auto it = rec.find(field);
    if (it == rec.end()) {
        throw ParseError(line, field, "missing");
    }
    if (!it->is_array()) {
        throw ParseError(line, field, "expected an array of numbers");
    }
    std::vector<double> out;
    out.reserve(it->size());
    for (const auto& v : *it) {
        if (!v.is_number()) {
            throw ParseError(line, field, "expected an array of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

Trace gen_trace(const WorkloadSpec& spec, const ArrivalModel& model, std::size_t n_jobs,
                std::uint64_t seed) {
    if (n_jobs == 0) {
        throw std::invalid_argument("n_jobs must be at least 1");
    }
    const double rate = model.long_run_rate();
    if (std::abs(rate - spec.total_rate()) > 1e-9 * spec.total_rate()) {
        throw std::invalid_argument("arrival model rate " + std::to_string(rate) +
                                    " does not match the workload's total rate " +
                                    std::to_string(spec.total_rate()));
    }

    // Separate streams so arrival times do not shift when class draws change.
    std::seed_seq arrival_seq{seed, std::uint64_t{0}};
    std::seed_seq job_seq{seed, std::uint64_t{1}};
    std::mt19937_64 arrival_rng(arrival_seq);
    std::mt19937_64 job_rng(job_seq);

    std::vector<double> weights;
    for (std::size_t i = 0; i < spec.class_count(); ++i) {
        weights.push_back(spec.mixture_weight(i));
    }
    std::discrete_distribution<std::size_t> pick_class(weights.begin(), weights.end());

    ArrivalModel::Sampler arrivals(model, arrival_rng);
    Trace trace;
    trace.events.reserve(n_jobs);
    for (std::size_t n = 0; n < n_jobs; ++n) {
        TraceEvent ev;
        ev.arrival_time = arrivals.next();
        ev.class_index = pick_class(job_rng);
        const auto& cls = spec.classes()[ev.class_index];
        for (const auto& epoch : cls.epochs) {
            ev.epoch_sizes.push_back(epoch.size_dist.sample(epoch.mean_size, job_rng));
        }
        for (std::size_t j = 0; j < cls.epochs.size(); ++j) {
            ev.rescale_draws.push_back(cls.rescale_dist.sample(cls.rescale_mean, job_rng));
        }
        trace.events.push_back(std::move(ev));
    }
    return trace;
}

void validate_trace(const Trace& trace, const WorkloadSpec& spec) {
    double last = 0.0;
    for (std::size_t n = 0; n < trace.events.size(); ++n) {
        const auto& ev = trace.events[n];
        const std::string where = "trace event " + std::to_string(n) + ": ";
        if (!(ev.arrival_time >= last)) {
            throw std::invalid_argument(where + "arrival times must be non-negative and non-decreasing");
        }
        last = ev.arrival_time;
        if (ev.class_index >= spec.class_count()) {
            throw std::invalid_argument(where + "unknown class index");
        }
        const auto epochs = spec.epoch_count(ev.class_index);
        if (ev.epoch_sizes.size() != epochs) {
            throw std::invalid_argument(where + "epoch_sizes length differs from the class's epoch count");
        }
        for (double x : ev.epoch_sizes) {
            if (!(x > 0.0)) throw std::invalid_argument(where + "epoch sizes must be positive");
        }
        for (double r : ev.rescale_draws) {
            if (!(r >= 0.0)) throw std::invalid_argument(where + "rescale draws must be non-negative");
        }
    }
}

double empirical_interarrival_c2(const Trace& trace) {
    const auto n = trace.events.size();
    if (n < 2) {
        return 0.0;
    }
    // Welford over the gaps.
    double mean = 0.0;
    double m2 = 0.0;
    double prev = 0.0;
    std::size_t count = 0;
    for (const auto& ev : trace.events) {
        const double gap = ev.arrival_time - prev;
        prev = ev.arrival_time;
        ++count;
        const double delta = gap - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (gap - mean);
    }
    const double var = m2 / static_cast<double>(count - 1);
    return var / (mean * mean);
}

void write_trace(std::ostream& out, const Trace& trace) {
    out << json{{"format", kTraceFormat}, {"version", kTraceVersion}}.dump() << '\n';
    for (const auto& ev : trace.events) {
        json rec;
        rec["t"] = ev.arrival_time;
        rec["class"] = ev.class_index;
        rec["sizes"] = ev.epoch_sizes;
        rec["rescales"] = ev.rescale_draws;
        out << rec.dump() << '\n';
    }
}

void write_trace(const std::filesystem::path& path, const Trace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    write_trace(out, trace);
}

Trace read_trace(std::istream& in) {
    Trace trace;
    std::string text;
    std::size_t line = 0;
    bool have_header = false;
    double last = 0.0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        json rec;
        try {
            rec = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(line, "<record>", e.what());
        }
        if (!rec.is_object()) {
            throw ParseError(line, "<record>", "expected a JSON object");
        }
        if (!have_header) {
            auto fmt = rec.find("format");
            if (fmt == rec.end() || !fmt->is_string() || fmt->get<std::string>() != kTraceFormat) {
                throw ParseError(line, "format", "expected trace header with format 'boa-trace'");
            }
            auto ver = rec.find("version");
            if (ver == rec.end() || !ver->is_number_integer() || ver->get<int>() != kTraceVersion) {
                throw ParseError(line, "version", "unsupported trace version");
            }
            have_header = true;
            continue;
        }

        TraceEvent ev;
        ev.arrival_time = require_number(rec, "t", line);
        if (!(ev.arrival_time >= 0.0) || !std::isfinite(ev.arrival_time)) {
            throw ParseError(line, "t", "arrival time must be non-negative");
        }
        if (ev.arrival_time < last) {
            throw ParseError(line, "t", "arrival times must be non-decreasing");
        }
        last = ev.arrival_time;
        auto cls = rec.find("class");
        if (cls == rec.end()) {
            throw ParseError(line, "class", "missing");
        }
        if (!cls->is_number_unsigned()) {
            throw ParseError(line, "class", "expected a non-negative class index");
        }
        ev.class_index = cls->get<std::size_t>();
        ev.epoch_sizes = require_numbers(rec, "sizes", line);
        if (ev.epoch_sizes.empty()) {
            throw ParseError(line, "sizes", "at least one epoch size is required");
        }
        for (double x : ev.epoch_sizes) {
            if (!(x > 0.0)) throw ParseError(line, "sizes", "epoch sizes must be positive");
        }
        ev.rescale_draws = require_numbers(rec, "rescales", line);
        for (double r : ev.rescale_draws) {
            if (!(r >= 0.0)) throw ParseError(line, "rescales", "rescale durations must be non-negative");
        }
        trace.events.push_back(std::move(ev));
    }
    if (!have_header) {
        throw ParseError(line == 0 ? 1 : line, "format", "missing trace header");
    }
    return trace;
}

Trace read_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open trace file '" + path.string() + "'");
    }
    return read_trace(in);
}

}  // namespace boa
