#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace boa {

/// Raised when a budget cannot sustain the offered load.
class InfeasibleBudget : public std::runtime_error {
public:
    InfeasibleBudget(const std::string& what, double load, double budget)
        : std::runtime_error(what), load_(load), budget_(budget) {}

    /// Minimum sustainable cost (sum of loads at width 1, or with rescale charges).
    double load() const noexcept { return load_; }
    double budget() const noexcept { return budget_; }

private:
    double load_;
    double budget_;
};

/// Malformed input file. Carries the 1-based line and the offending field.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::string field, const std::string& detail)
        : std::runtime_error("line " + std::to_string(line) + ", field '" + field + "': " + detail),
          line_(line),
          field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

/// A plan that does not assign a width to every (class, epoch) pair.
class PlanCoverageError : public std::invalid_argument {
public:
    explicit PlanCoverageError(std::vector<std::pair<std::size_t, std::size_t>> missing);

    const std::vector<std::pair<std::size_t, std::size_t>>& missing() const noexcept { return missing_; }

private:
    std::vector<std::pair<std::size_t, std::size_t>> missing_;
};

}  // namespace boa
