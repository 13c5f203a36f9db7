#pragma once

#include <stdexcept>

#include "uc/model.hpp"
#include "uc/network.hpp"

namespace uc {

struct BetaTable {
    Matrix beta;                // N x T, price-like coefficient on dispatch
    std::vector<double> beta0;  // N, commitment threshold per unit
};

// Commitment threshold: max(-a - b/p_max, -a - b/p_min).
double beta_threshold(const GeneratingUnit& unit);

// beta[i][t] = -lambda0_t + sum_l (lambda+_lt - lambda-_lt) * gamma_unit[l][i]
BetaTable compute_beta(const UcInstance& instance, const NetworkModel& model,
                       const Multipliers& lambda);

// z[i][t] = 1 iff beta[i][t] < beta0[i]; the boundary goes to off.
IntMatrix trial_uc(const BetaTable& beta_table);

// Endpoint dispatch of the committed units: p_max when a + beta <= 0 (ties
// toward p_max), else p_min.
Matrix trial_dispatch(const BetaTable& beta_table, const IntMatrix& z_trial,
                      const std::vector<GeneratingUnit>& units);

// Relaxed dual value at lambda, evaluated at the trial point: start-up plus
// fuel cost of the trial schedule plus the multiplier terms with their
// constants (demand and limit offsets) restored.
double eval_qhat(const UcInstance& instance, const NetworkModel& model, const Multipliers& lambda,
                 const IntMatrix& z_trial, const Matrix& p_trial);

// Start-up cost charged per 0->1 transition, including t=1 from an off
// initial state.
double startup_cost_of_row(const std::vector<int>& z_row, const GeneratingUnit& unit);

struct PeriodLpInfeasible : std::runtime_error {
    int period;
    explicit PeriodLpInfeasible(int t)
        : std::runtime_error("period " + std::to_string(t + 1) + " dispatch LP infeasible"),
          period(t) {}
};

// Per-period convex-hull LPs (z relaxed to [0,1]); row duals give the
// dual-optimal multipliers. Throws PeriodLpInfeasible.
Multipliers init_multipliers(const UcInstance& instance, const NetworkModel& model,
                             double lp_tolerance = 1e-8, bool parallel = true);

// Sum over periods of the convex-hull LP optima; equals eval_qhat at the
// initialization multipliers up to start-up cost of the trial point.
double sum_period_lp_optima(const UcInstance& instance, const NetworkModel& model,
                            double lp_tolerance = 1e-8);

}  // namespace uc
