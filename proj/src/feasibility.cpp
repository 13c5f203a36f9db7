#include "uc/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uc {

double ViolationVector::total() const {
    double sum = 0.0;
    for (double v : v0_plus) sum += v;
    for (double v : v0_minus) sum += v;
    for (const auto& row : vl_plus)
        for (double v : row) sum += v;
    for (const auto& row : vl_minus)
        for (double v : row) sum += v;
    return sum;
}

namespace {

// Shared constraint-matrix construction for the slack LP and the economic
// dispatch re-solve; only objective and slack bounds differ.
FeasibilityLp build_lp_impl(const UcInstance& instance, const NetworkModel& model,
                            const IntMatrix& z_fixed, const RetainedSet& retained,
                            bool cost_objective, const ViolationVector* slack_budget) {
    const int n = static_cast<int>(instance.num_units());
    const int nline = static_cast<int>(instance.num_lines());
    const int horizon = instance.horizon;

    FeasibilityLp out;
    lp::LpProblem& lp = out.problem;

    // Dispatch variables; capacity (and the bound-foldable ramp cases) live
    // in the variable bounds.
    out.p_var.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(horizon), -1));
    std::vector<std::vector<double>> lb(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(horizon), 0.0));
    std::vector<std::vector<double>> ub = lb;
    for (int i = 0; i < n; ++i) {
        const auto& unit = instance.units[static_cast<std::size_t>(i)];
        for (int t = 0; t < horizon; ++t) {
            if (z_fixed[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]) {
                lb[i][t] = unit.p_min;
                ub[i][t] = unit.p_max;
            }
        }
        // Ramp cases with a fixed endpoint tighten bounds instead of rows.
        for (int t = 0; t < horizon; ++t) {
            int zt = z_fixed[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
            int zp = t == 0 ? (unit.init_on ? 1 : 0)
                            : z_fixed[static_cast<std::size_t>(i)][static_cast<std::size_t>(t - 1)];
            double p_prev_fixed = t == 0 ? (unit.init_on ? unit.init_power : 0.0) : -1.0;
            if (zt == 1 && zp == 0) {
                ub[i][t] = std::min(ub[i][t], unit.startup_ramp);
            } else if (zt == 0 && zp == 1) {
                if (t == 0) {
                    if (p_prev_fixed > unit.shutdown_ramp)
                        lb[i][t] = 1.0;  // impossible: p fixed 0, forces infeasibility
                } else {
                    ub[i][t - 1] = std::min(ub[i][t - 1], unit.shutdown_ramp);
                }
            } else if (zt == 1 && zp == 1 && t == 0) {
                ub[i][t] = std::min(ub[i][t], p_prev_fixed + unit.ramp_up);
                lb[i][t] = std::max(lb[i][t], p_prev_fixed - unit.ramp_down);
            }
        }
        for (int t = 0; t < horizon; ++t)
            out.p_var[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
                static_cast<int>(lp.add_variable(cost_objective ? unit.cost_a : 0.0, lb[i][t], ub[i][t]));
    }

    auto slack_bound = [&](double budget) { return slack_budget ? budget : kUnlimited; };

    out.v0p_var.resize(static_cast<std::size_t>(horizon));
    out.v0m_var.resize(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
        double bp = slack_budget ? slack_budget->v0_plus[static_cast<std::size_t>(t)] : 0.0;
        double bm = slack_budget ? slack_budget->v0_minus[static_cast<std::size_t>(t)] : 0.0;
        out.v0p_var[static_cast<std::size_t>(t)] =
            static_cast<int>(lp.add_variable(cost_objective ? 0.0 : 1.0, 0.0, slack_bound(bp)));
        out.v0m_var[static_cast<std::size_t>(t)] =
            static_cast<int>(lp.add_variable(cost_objective ? 0.0 : 1.0, 0.0, slack_bound(bm)));
    }
    out.vlp_var.assign(static_cast<std::size_t>(nline),
                       std::vector<int>(static_cast<std::size_t>(horizon), -1));
    out.vlm_var = out.vlp_var;
    for (const auto& [l, t, dir] : retained) {
        double budget = 0.0;
        if (slack_budget)
            budget = dir == FlowDirection::Plus
                         ? slack_budget->vl_plus[static_cast<std::size_t>(l)][static_cast<std::size_t>(t)]
                         : slack_budget->vl_minus[static_cast<std::size_t>(l)][static_cast<std::size_t>(t)];
        int var = static_cast<int>(
            lp.add_variable(cost_objective ? 0.0 : 1.0, 0.0, slack_bound(budget)));
        if (dir == FlowDirection::Plus)
            out.vlp_var[static_cast<std::size_t>(l)][static_cast<std::size_t>(t)] = var;
        else
            out.vlm_var[static_cast<std::size_t>(l)][static_cast<std::size_t>(t)] = var;
    }

    const int nvars = static_cast<int>(lp.num_vars());
    auto new_row = [nvars]() { return std::vector<double>(static_cast<std::size_t>(nvars), 0.0); };

    // Balance rows: sum_i p + v0+ - v0- = D_t.
    for (int t = 0; t < horizon; ++t) {
        auto row = new_row();
        for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(out.p_var[i][t])] = 1.0;
        row[static_cast<std::size_t>(out.v0p_var[static_cast<std::size_t>(t)])] = 1.0;
        row[static_cast<std::size_t>(out.v0m_var[static_cast<std::size_t>(t)])] = -1.0;
        lp.add_row(std::move(row), lp::Relation::Equal, instance.total_demand(t));
    }

    // Retained line rows with their slack.
    for (const auto& [l, t, dir] : retained) {
        const auto& line = instance.lines[static_cast<std::size_t>(l)];
        std::vector<double> d_t = instance.bus_demand(t);
        double base = 0.0;
        for (std::size_t m = 0; m < d_t.size(); ++m)
            base += model.gamma_load[static_cast<std::size_t>(l)][m] * d_t[m];
        auto row = new_row();
        double sign = dir == FlowDirection::Plus ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i)
            row[static_cast<std::size_t>(out.p_var[i][t])] =
                sign * model.gamma_unit[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
        int slack = dir == FlowDirection::Plus ? out.vlp_var[static_cast<std::size_t>(l)][static_cast<std::size_t>(t)]
                                               : out.vlm_var[static_cast<std::size_t>(l)][static_cast<std::size_t>(t)];
        row[static_cast<std::size_t>(slack)] = -1.0;
        lp.add_row(std::move(row), lp::Relation::LessEqual, line.limit + sign * base);
    }

    // Ramp rows between two committed periods (skipped when the dispatch box
    // cannot violate them).
    for (int i = 0; i < n; ++i) {
        const auto& unit = instance.units[static_cast<std::size_t>(i)];
        for (int t = 1; t < horizon; ++t) {
            if (!z_fixed[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] ||
                !z_fixed[static_cast<std::size_t>(i)][static_cast<std::size_t>(t - 1)])
                continue;
            double span = ub[i][t] - lb[i][t - 1];
            if (span > unit.ramp_up) {
                auto row = new_row();
                row[static_cast<std::size_t>(out.p_var[i][t])] = 1.0;
                row[static_cast<std::size_t>(out.p_var[i][t - 1])] = -1.0;
                lp.add_row(std::move(row), lp::Relation::LessEqual, unit.ramp_up);
            }
            if (ub[i][t - 1] - lb[i][t] > unit.ramp_down) {
                auto row = new_row();
                row[static_cast<std::size_t>(out.p_var[i][t - 1])] = 1.0;
                row[static_cast<std::size_t>(out.p_var[i][t])] = -1.0;
                lp.add_row(std::move(row), lp::Relation::LessEqual, unit.ramp_down);
            }
        }
    }
    return out;
}

ViolationVector extract_violation(const UcInstance& instance, const FeasibilityLp& flp,
                                  const lp::LpSolution& sol) {
    const std::size_t nline = instance.num_lines();
    const std::size_t horizon = static_cast<std::size_t>(instance.horizon);
    ViolationVector v;
    v.v0_plus.resize(horizon);
    v.v0_minus.resize(horizon);
    v.vl_plus.assign(nline, std::vector<double>(horizon, 0.0));
    v.vl_minus = v.vl_plus;
    for (std::size_t t = 0; t < horizon; ++t) {
        v.v0_plus[t] = sol.x[static_cast<std::size_t>(flp.v0p_var[t])];
        v.v0_minus[t] = sol.x[static_cast<std::size_t>(flp.v0m_var[t])];
    }
    for (std::size_t l = 0; l < nline; ++l)
        for (std::size_t t = 0; t < horizon; ++t) {
            if (flp.vlp_var[l][t] >= 0) v.vl_plus[l][t] = sol.x[static_cast<std::size_t>(flp.vlp_var[l][t])];
            if (flp.vlm_var[l][t] >= 0) v.vl_minus[l][t] = sol.x[static_cast<std::size_t>(flp.vlm_var[l][t])];
        }
    return v;
}

Matrix extract_dispatch(const UcInstance& instance, const FeasibilityLp& flp,
                        const lp::LpSolution& sol) {
    Matrix p(instance.num_units(),
             std::vector<double>(static_cast<std::size_t>(instance.horizon), 0.0));
    for (std::size_t i = 0; i < instance.num_units(); ++i)
        for (int t = 0; t < instance.horizon; ++t)
            p[i][static_cast<std::size_t>(t)] =
                sol.x[static_cast<std::size_t>(flp.p_var[i][static_cast<std::size_t>(t)])];
    return p;
}

}  // namespace

FeasibilityLp build_feasibility_lp(const UcInstance& instance, const NetworkModel& model,
                                   const IntMatrix& z_fixed, const RetainedSet& retained) {
    return build_lp_impl(instance, model, z_fixed, retained, false, nullptr);
}

FeasibilityResult run_feasibility_test(const UcInstance& instance, const NetworkModel& model,
                                       const IntMatrix& z_fixed, const SolverConfig& config,
                                       const RetainedSet& retained) {
    FeasibilityLp flp = build_feasibility_lp(instance, model, z_fixed, retained);
    lp::LpSolution sol = lp::solve_lp(flp.problem, config.lp_tolerance);
    if (sol.status != lp::LpStatus::Optimal)
        throw std::runtime_error("feasibility-testing LP did not solve to optimality");

    FeasibilityResult result;
    result.violation = extract_violation(instance, flp, sol);
    result.dispatch = extract_dispatch(instance, flp, sol);
    result.total_violation = result.violation.total();
    result.feasible = result.total_violation <= config.epsilon;
    return result;
}

Multipliers extract_subgradient(const ViolationVector& violation) {
    Multipliers g;
    g.lambda0.resize(violation.v0_plus.size());
    for (std::size_t t = 0; t < violation.v0_plus.size(); ++t)
        g.lambda0[t] = violation.v0_plus[t] - violation.v0_minus[t];
    g.lambda_plus = violation.vl_plus;
    g.lambda_minus = violation.vl_minus;
    return g;
}

Matrix economic_dispatch(const UcInstance& instance, const NetworkModel& model,
                         const IntMatrix& z_fixed, const RetainedSet& retained,
                         const ViolationVector& budget, double lp_tolerance) {
    FeasibilityLp flp = build_lp_impl(instance, model, z_fixed, retained, true, &budget);
    lp::LpSolution sol = lp::solve_lp(flp.problem, lp_tolerance);
    if (sol.status != lp::LpStatus::Optimal)
        throw std::runtime_error("economic dispatch LP did not solve to optimality");
    return extract_dispatch(instance, flp, sol);
}

}  // namespace uc
