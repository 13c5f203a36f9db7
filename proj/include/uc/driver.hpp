#pragma once

#include <optional>

#include "uc/model.hpp"

namespace uc {

struct CostReport {
    double total_cost = 0.0;
    double startup_cost = 0.0;
    double fuel_cost = 0.0;
    std::optional<double> normalized_cost;
};

enum class SolveStatus { Feasible, IterationLimit, InstanceInfeasible };

struct StageTimings {
    double init_ms = 0.0;
    double trial_ms = 0.0;
    double adjust_ms = 0.0;
    double feasibility_ms = 0.0;
    double update_ms = 0.0;
    double total_ms = 0.0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::InstanceInfeasible;
    Schedule schedule;  // valid when status == Feasible
    CostReport cost;
    int iterations = 0;  // feasibility tests performed
    std::vector<double> violation_history;
    double c0_used = 0.0;
    StageTimings timings;
    int infeasible_period = -1;  // when status == InstanceInfeasible
};

// Orchestration: initialize multipliers from the per-period LPs, then loop
// trial commitment -> min-up/down repair -> feasibility test, updating the
// multipliers by the violation subgradient with step c0/k until the total
// violation drops below epsilon or the iteration cap is hit. On success the
// dispatch is re-optimized for cost at the fixed commitment.
SolveResult solve_schedule(const UcInstance& instance, const SolverConfig& config,
                           std::optional<double> c0_override = std::nullopt);

CostReport compute_cost(const Schedule& schedule, const std::vector<GeneratingUnit>& units);

double normalized_cost(double solution_cost, double reference_cost);

// Straight evaluation of the balance, line, capacity, ramp, and min-up/down
// constraints; returns the worst absolute residual (MW). Independent of the
// LP path.
double max_constraint_residual(const UcInstance& instance, const Schedule& schedule);

}  // namespace uc
