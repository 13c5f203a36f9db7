#pragma once

#include "uc/lpkernel.hpp"
#include "uc/model.hpp"
#include "uc/network.hpp"

namespace uc {

struct ViolationVector {
    std::vector<double> v0_plus;   // T, balance deficit (MW)
    std::vector<double> v0_minus;  // T, balance surplus (MW)
    Matrix vl_plus;                // L x T, forward line overload (MW)
    Matrix vl_minus;               // L x T, reverse line overload (MW)

    double total() const;
};

struct FeasibilityResult {
    ViolationVector violation;
    Matrix dispatch;          // N x T
    double total_violation = 0.0;
    bool feasible = false;    // total_violation <= epsilon
};

struct FeasibilityLp {
    lp::LpProblem problem;
    // Variable indices.
    std::vector<std::vector<int>> p_var;   // N x T
    std::vector<int> v0p_var, v0m_var;     // per period
    std::vector<std::vector<int>> vlp_var, vlm_var;  // L x T, -1 when screened out
};

// Slack LP for a fixed commitment: minimize the total violation of the
// system-wide rows; capacity enters as variable bounds, ramp rows carry no
// slacks. Always feasible for a min-up/down-feasible commitment.
FeasibilityLp build_feasibility_lp(const UcInstance& instance, const NetworkModel& model,
                                   const IntMatrix& z_fixed, const RetainedSet& retained);

FeasibilityResult run_feasibility_test(const UcInstance& instance, const NetworkModel& model,
                                       const IntMatrix& z_fixed, const SolverConfig& config,
                                       const RetainedSet& retained);

// Subgradient direction: balance components v0+ - v0-, line components the
// (nonnegative) line slacks; screened entries stay zero.
Multipliers extract_subgradient(const ViolationVector& violation);

// Cost-minimizing dispatch at fixed commitment with the violation budget of a
// previous slack solve (slack upper bounds set to the optimal slack values,
// exactly zero when the solve was clean).
Matrix economic_dispatch(const UcInstance& instance, const NetworkModel& model,
                         const IntMatrix& z_fixed, const RetainedSet& retained,
                         const ViolationVector& budget, double lp_tolerance);

}  // namespace uc
