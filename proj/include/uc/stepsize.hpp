#pragma once

#include "uc/lagrangian.hpp"
#include "uc/model.hpp"
#include "uc/network.hpp"

namespace uc {

// c_k = c0 / k, k >= 1.
struct StepSchedule {
    double c0 = 1.0;
    double at(int k) const { return c0 / k; }
};

// lambda + c_k * g; line components of g must be nonnegative so the result
// stays dual-feasible.
Multipliers update_multipliers(const Multipliers& lambda_k, const Multipliers& g, double c_k);

// Largest c0 in [0, u] such that every (i, t) whose margin |beta - beta0|
// is at least delta keeps the same side with at least that margin after the
// first update. Closed form: beta is affine in c0, so each protected entry
// contributes a half-line upper bound. Falls back to min(u, 1e-3) when the
// exact maximum is 0.
double optimize_c0(const UcInstance& instance, const NetworkModel& model,
                   const Multipliers& lambda_star, const Multipliers& g,
                   const BetaTable& beta_at_lambda_star, const SolverConfig& config);

// Per-entry derivative of beta[i][t] along the update direction g.
Matrix beta_direction(const UcInstance& instance, const NetworkModel& model, const Multipliers& g);

}  // namespace uc
