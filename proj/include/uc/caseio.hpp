#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "uc/driver.hpp"
#include "uc/model.hpp"

namespace uc {

struct ScalingFactors {
    double s_d = 1.0;  // loads
    double s_m = 1.0;  // minimum up/down times
    double s_f = 1.0;  // transmission limits
    double s_r = 1.0;  // ramp limits
};

struct CaseParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Native case document (JSON). Unknown fields are rejected; the result
// passes validate_instance.
UcInstance parse_native_case(std::istream& in);
UcInstance parse_native_case_text(const std::string& text);
std::string write_native_case(const UcInstance& instance);

// Minimal MATPOWER-style reader: bus/branch/gen tables only, positional
// generator extras (JSON) supply what the format lacks.
UcInstance parse_matpower_subset(std::istream& matpower, std::istream& extras);

// Demands x s_d; min up/down x s_m rounded up and capped at T; limits x s_f;
// ramps x s_r with start-up/shut-down ramps floored at p_min.
UcInstance apply_scaling(const UcInstance& instance, const ScalingFactors& factors);

struct ScheduleSummary {
    CostReport cost;
    int iterations = 0;
    double violation = 0.0;
};

std::string write_schedule(const Schedule& schedule, const std::vector<std::string>& unit_ids,
                           const ScheduleSummary& summary);

struct ParsedSchedule {
    Schedule schedule;
    std::vector<std::string> unit_ids;
    ScheduleSummary summary;
};
ParsedSchedule parse_schedule(std::istream& in);

struct BenchRow {
    std::string case_name;
    ScalingFactors factors;
    double c0 = 0.0;
    int iterations = 0;
    bool feasible = false;
    double cost = 0.0;
    double normalized_cost = 0.0;  // 0 when no reference available
    double wall_ms = 0.0;
    bool c0_optimized = false;  // c0 came from the closed-form optimizer
};

std::string bench_csv_header();
std::string bench_csv_row(const BenchRow& row);

// Locale-independent shortest-round-trip double formatting.
std::string format_double(double v);

}  // namespace uc
