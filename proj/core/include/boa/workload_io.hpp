#pragma once

#include <filesystem>
#include <iosfwd>

#include "boa/workload.hpp"

namespace boa {

/// Reads a JSON workload document. Schema errors throw std::invalid_argument
/// naming the offending field path.
WorkloadSpec read_workload(std::istream& in);
WorkloadSpec read_workload(const std::filesystem::path& path);

void write_workload(std::ostream& out, const WorkloadSpec& spec);

}  // namespace boa
