#include "boa/workload_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace boa {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& detail) {
    throw std::invalid_argument("workload spec: " + path + ": " + detail);
}

double number_at(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing");
    if (!it->is_number()) fail(path + "." + key, "expected a number");
    return it->get<double>();
}

std::string string_or(const json& obj, const char* key, const std::string& fallback,
                      const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_string()) fail(path + "." + key, "expected a string");
    return it->get<std::string>();
}

SizeDist dist_at(const json& obj, const char* key, const char* sigma_key, const std::string& path) {
    SizeDist d;
    try {
        d.kind = size_dist_from_string(string_or(obj, key, "deterministic", path));
    } catch (const std::invalid_argument& e) {
        fail(path + "." + key, e.what());
    }
    if (d.kind == SizeDistKind::lognormal) {
        if (sigma_key == nullptr) fail(path + "." + key, "lognormal is not allowed here");
        d.sigma = number_at(obj, sigma_key, path);
    }
    return d;
}

SpeedupProfile profile_at(const json& epoch, const std::string& path) {
    auto it = epoch.find("profile");
    if (it == epoch.end()) fail(path + ".profile", "missing");
    if (!it->is_array() || it->empty()) fail(path + ".profile", "expected [[k, s], ...]");
    std::vector<SpeedupPoint> pts;
    for (std::size_t n = 0; n < it->size(); ++n) {
        const auto& pair = (*it)[n];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
            fail(path + ".profile[" + std::to_string(n) + "]", "expected [k, s]");
        }
        pts.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    try {
        return SpeedupProfile(std::move(pts));
    } catch (const std::invalid_argument& e) {
        fail(path + ".profile", e.what());
    }
}

}  // namespace

WorkloadSpec read_workload(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("workload spec: ") + e.what());
    }
    if (!doc.is_object()) fail("$", "expected an object");
    auto classes_it = doc.find("classes");
    if (classes_it == doc.end() || !classes_it->is_array()) fail("$.classes", "expected an array");

    std::optional<double> total_rate;
    if (doc.contains("total_rate")) total_rate = number_at(doc, "total_rate", "$");

    std::vector<JobClassSpec> classes;
    for (std::size_t i = 0; i < classes_it->size(); ++i) {
        const auto& c = (*classes_it)[i];
        const std::string path = "$.classes[" + std::to_string(i) + "]";
        if (!c.is_object()) fail(path, "expected an object");
        JobClassSpec cls;
        cls.class_id = string_or(c, "class_id", "class" + std::to_string(i), path);
        if (c.contains("arrival_rate")) cls.arrival_rate = number_at(c, "arrival_rate", path);
        if (c.contains("mixture_weight")) cls.mixture_weight = number_at(c, "mixture_weight", path);
        cls.rescale_mean = c.contains("rescale_mean") ? number_at(c, "rescale_mean", path) : 0.0;
        cls.rescale_dist = dist_at(c, "rescale_dist", nullptr, path);

        auto epochs = c.find("epochs");
        if (epochs == c.end() || !epochs->is_array()) fail(path + ".epochs", "expected an array");
        for (std::size_t j = 0; j < epochs->size(); ++j) {
            const auto& e = (*epochs)[j];
            const std::string epath = path + ".epochs[" + std::to_string(j) + "]";
            if (!e.is_object()) fail(epath, "expected an object");
            EpochSpec ep;
            ep.mean_size = number_at(e, "mean_size", epath);
            ep.size_dist = dist_at(e, "size_dist", "size_sigma", epath);
            ep.profile = profile_at(e, epath);
            cls.epochs.push_back(std::move(ep));
        }
        classes.push_back(std::move(cls));
    }

    if (total_rate && std::all_of(classes.begin(), classes.end(),
                                  [](const auto& c) { return c.arrival_rate == 0.0; })) {
        return WorkloadSpec::from_mixture(*total_rate, std::move(classes));
    }
    WorkloadSpec spec(std::move(classes));
    if (total_rate && std::abs(*total_rate - spec.total_rate()) > 1e-9 * spec.total_rate()) {
        fail("$.total_rate", "disagrees with the sum of class arrival rates");
    }
    return spec;
}

WorkloadSpec read_workload(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open workload spec '" + path.string() + "'");
    }
    return read_workload(in);
}

void write_workload(std::ostream& out, const WorkloadSpec& spec) {
    json doc;
    doc["total_rate"] = spec.total_rate();
    json classes = json::array();
    for (const auto& c : spec.classes()) {
        json jc;
        jc["class_id"] = c.class_id;
        jc["arrival_rate"] = c.arrival_rate;
        jc["mixture_weight"] = *c.mixture_weight;
        jc["rescale_mean"] = c.rescale_mean;
        jc["rescale_dist"] = to_string(c.rescale_dist.kind);
        json epochs = json::array();
        for (const auto& e : c.epochs) {
            json je;
            je["mean_size"] = e.mean_size;
            je["size_dist"] = to_string(e.size_dist.kind);
            if (e.size_dist.kind == SizeDistKind::lognormal) je["size_sigma"] = e.size_dist.sigma;
            json profile = json::array();
            for (const auto& p : e.profile.points()) profile.push_back({p.gpus, p.speedup});
            je["profile"] = std::move(profile);
            epochs.push_back(std::move(je));
        }
        jc["epochs"] = std::move(epochs);
        classes.push_back(std::move(jc));
    }
    doc["classes"] = std::move(classes);
    out << doc.dump(2) << '\n';
}

}  // namespace boa
