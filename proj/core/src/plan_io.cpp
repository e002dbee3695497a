#include "boa/plan_io.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

#include <json.hpp>

#include "boa/errors.hpp"

namespace boa {

using nlohmann::json;

void write_plan(std::ostream& out, const WidthPlan& plan, const WorkloadSpec& workload,
                const std::optional<PlanEvaluation>& evaluation) {
    require_coverage(plan, workload);
    json doc;
    doc["budget"] = plan.budget;
    doc["run_budget"] = plan.run_budget;
    doc["kind"] = plan.kind == PlanKind::integer ? "integer" : "fractional";
    json glue = json::object();
    json widths = json::object();
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        const auto& id = workload.classes()[i].class_id;
        glue[id] = i < plan.glue.size() ? plan.glue[i] : 1;
        widths[id] = plan.widths[i];
    }
    doc["glue"] = std::move(glue);
    doc["widths"] = std::move(widths);
    if (evaluation) {
        doc["rescale_aware_eval"] = {{"mean_jct", evaluation->mean_jct}, {"budget", evaluation->budget}};
    }
    out << std::setprecision(17) << doc.dump(2) << '\n';
}

void write_plan(const std::filesystem::path& path, const WidthPlan& plan, const WorkloadSpec& workload,
                const std::optional<PlanEvaluation>& evaluation) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_plan(out, plan, workload, evaluation);
}

WidthPlan read_plan(std::istream& in, const WorkloadSpec& workload) {
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("plan is not valid JSON: ") + e.what());
    }
    auto number = [&](const char* key) {
        if (!doc.contains(key) || !doc[key].is_number()) {
            throw std::invalid_argument(std::string("$.") + key + ": expected a number");
        }
        return doc[key].get<double>();
    };

    WidthPlan plan;
    plan.budget = number("budget");
    plan.run_budget = doc.contains("run_budget") ? number("run_budget") : plan.budget;
    const std::string kind = doc.value("kind", "fractional");
    if (kind == "integer") {
        plan.kind = PlanKind::integer;
    } else if (kind == "fractional") {
        plan.kind = PlanKind::fractional;
    } else {
        throw std::invalid_argument("$.kind: expected \"integer\" or \"fractional\"");
    }

    if (!doc.contains("widths") || !doc["widths"].is_object()) {
        throw std::invalid_argument("$.widths: expected an object keyed by class id");
    }
    const auto& widths = doc["widths"];
    const json glue = doc.value("glue", json::object());
    std::vector<std::pair<std::size_t, std::size_t>> missing;
    for (std::size_t i = 0; i < workload.class_count(); ++i) {
        const auto& id = workload.classes()[i].class_id;
        auto& row = plan.widths.emplace_back();
        if (widths.contains(id)) {
            if (!widths[id].is_array()) {
                throw std::invalid_argument("$.widths." + id + ": expected an array");
            }
            for (const auto& k : widths[id]) {
                if (!k.is_number()) throw std::invalid_argument("$.widths." + id + ": widths must be numbers");
                row.push_back(k.get<double>());
            }
        }
        for (std::size_t j = row.size(); j < workload.epoch_count(i); ++j) missing.emplace_back(i, j);
        int g = 1;
        if (glue.contains(id)) {
            if (!glue[id].is_number_integer()) throw std::invalid_argument("$.glue." + id + ": expected an integer");
            g = glue[id].get<int>();
        }
        plan.glue.push_back(g);
    }
    if (!missing.empty()) throw PlanCoverageError(std::move(missing));
    require_coverage(plan, workload);
    return plan;
}

WidthPlan read_plan(const std::filesystem::path& path, const WorkloadSpec& workload) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_plan(in, workload);
}

}  // namespace boa
