#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "boa/optimizer.hpp"
#include "boa/workload.hpp"

namespace boa {

/// Writes a plan as JSON keyed by class id. `evaluation`, when given, is
/// stored under "rescale_aware_eval".
void write_plan(std::ostream& out, const WidthPlan& plan, const WorkloadSpec& workload,
                const std::optional<PlanEvaluation>& evaluation = std::nullopt);
void write_plan(const std::filesystem::path& path, const WidthPlan& plan, const WorkloadSpec& workload,
                const std::optional<PlanEvaluation>& evaluation = std::nullopt);

/// Reads a plan written by write_plan. Class ids are resolved against
/// `workload`; throws std::invalid_argument on schema errors and
/// PlanCoverageError when a class or epoch is missing.
WidthPlan read_plan(std::istream& in, const WorkloadSpec& workload);
WidthPlan read_plan(const std::filesystem::path& path, const WorkloadSpec& workload);

}  // namespace boa
