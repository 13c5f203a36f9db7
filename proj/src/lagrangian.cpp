#include "uc/lagrangian.hpp"

#include <algorithm>
#include <cmath>

#include "uc/lpkernel.hpp"

namespace uc {

double beta_threshold(const GeneratingUnit& unit) {
    return std::max(-unit.cost_a - unit.cost_b / unit.p_max,
                    -unit.cost_a - unit.cost_b / unit.p_min);
}

BetaTable compute_beta(const UcInstance& instance, const NetworkModel& model,
                       const Multipliers& lambda) {
    const std::size_t n = instance.num_units();
    const std::size_t nline = instance.num_lines();
    const std::size_t horizon = static_cast<std::size_t>(instance.horizon);

    BetaTable table;
    table.beta.assign(n, std::vector<double>(horizon, 0.0));
    table.beta0.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        table.beta0[i] = beta_threshold(instance.units[i]);
        for (std::size_t t = 0; t < horizon; ++t) {
            double b = -lambda.lambda0[t];
            for (std::size_t l = 0; l < nline; ++l)
                b += (lambda.lambda_plus[l][t] - lambda.lambda_minus[l][t]) * model.gamma_unit[l][i];
            table.beta[i][t] = b;
        }
    }
    return table;
}

IntMatrix trial_uc(const BetaTable& beta_table) {
    IntMatrix z(beta_table.beta.size());
    for (std::size_t i = 0; i < beta_table.beta.size(); ++i) {
        z[i].resize(beta_table.beta[i].size());
        for (std::size_t t = 0; t < beta_table.beta[i].size(); ++t)
            z[i][t] = beta_table.beta[i][t] < beta_table.beta0[i] ? 1 : 0;
    }
    return z;
}

Matrix trial_dispatch(const BetaTable& beta_table, const IntMatrix& z_trial,
                      const std::vector<GeneratingUnit>& units) {
    Matrix p(z_trial.size());
    for (std::size_t i = 0; i < z_trial.size(); ++i) {
        const auto& unit = units[i];
        p[i].resize(z_trial[i].size(), 0.0);
        for (std::size_t t = 0; t < z_trial[i].size(); ++t) {
            if (!z_trial[i][t]) continue;
            double marginal = unit.cost_a + beta_table.beta[i][t];
            p[i][t] = marginal <= 0.0 ? unit.p_max : unit.p_min;
        }
    }
    return p;
}

double startup_cost_of_row(const std::vector<int>& z_row, const GeneratingUnit& unit) {
    double cost = 0.0;
    int prev = unit.init_on ? 1 : 0;
    for (int state : z_row) {
        if (state == 1 && prev == 0) cost += unit.startup_cost;
        prev = state;
    }
    return cost;
}

double eval_qhat(const UcInstance& instance, const NetworkModel& model, const Multipliers& lambda,
                 const IntMatrix& z_trial, const Matrix& p_trial) {
    const std::size_t n = instance.num_units();
    const std::size_t nline = instance.num_lines();
    double value = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const auto& unit = instance.units[i];
        value += startup_cost_of_row(z_trial[i], unit);
        for (int t = 0; t < instance.horizon; ++t)
            value += unit.cost_a * p_trial[i][static_cast<std::size_t>(t)] +
                     unit.cost_b * z_trial[i][static_cast<std::size_t>(t)];
    }

    for (int t = 0; t < instance.horizon; ++t) {
        std::vector<double> p_t(n);
        for (std::size_t i = 0; i < n; ++i) p_t[i] = p_trial[i][static_cast<std::size_t>(t)];
        std::vector<double> d_t = instance.bus_demand(t);
        std::vector<double> flows = line_flows(model, p_t, d_t);

        double total_p = 0.0;
        for (double p : p_t) total_p += p;
        value += lambda.lambda0[static_cast<std::size_t>(t)] * (instance.total_demand(t) - total_p);

        for (std::size_t l = 0; l < nline; ++l) {
            double limit = instance.lines[l].limit;
            if (!std::isfinite(limit)) continue;  // multipliers stay zero for unlimited lines
            value += lambda.lambda_plus[l][static_cast<std::size_t>(t)] * (flows[l] - limit);
            value += lambda.lambda_minus[l][static_cast<std::size_t>(t)] * (-flows[l] - limit);
        }
    }
    return value;
}

namespace {

struct PeriodLp {
    lp::LpProblem problem;
    int balance_row = -1;
    std::vector<int> plus_row;   // per line, -1 when unlimited
    std::vector<int> minus_row;
};

// Convex-hull relaxation of period t: z in [0,1], coupling rows link p to z.
PeriodLp build_period_lp(const UcInstance& instance, const NetworkModel& model, int t) {
    const int n = static_cast<int>(instance.num_units());
    const int nline = static_cast<int>(instance.num_lines());
    PeriodLp out;
    lp::LpProblem& lp = out.problem;

    for (int i = 0; i < n; ++i)
        lp.add_variable(instance.units[static_cast<std::size_t>(i)].cost_a, 0.0,
                        instance.units[static_cast<std::size_t>(i)].p_max);
    for (int i = 0; i < n; ++i)
        lp.add_variable(instance.units[static_cast<std::size_t>(i)].cost_b, 0.0, 1.0);

    const int nvars = 2 * n;
    auto row = [nvars]() { return std::vector<double>(static_cast<std::size_t>(nvars), 0.0); };

    auto balance = row();
    for (int i = 0; i < n; ++i) balance[static_cast<std::size_t>(i)] = 1.0;
    out.balance_row = static_cast<int>(lp.rows.size());
    lp.add_row(std::move(balance), lp::Relation::Equal, instance.total_demand(t));

    std::vector<double> d_t = instance.bus_demand(t);
    out.plus_row.assign(static_cast<std::size_t>(nline), -1);
    out.minus_row.assign(static_cast<std::size_t>(nline), -1);
    for (int l = 0; l < nline; ++l) {
        double limit = instance.lines[static_cast<std::size_t>(l)].limit;
        if (!std::isfinite(limit)) continue;
        double base = 0.0;
        for (std::size_t m = 0; m < d_t.size(); ++m) base += model.gamma_load[l][m] * d_t[m];
        auto plus = row();
        auto minus = row();
        for (int i = 0; i < n; ++i) {
            plus[static_cast<std::size_t>(i)] = model.gamma_unit[l][static_cast<std::size_t>(i)];
            minus[static_cast<std::size_t>(i)] = -model.gamma_unit[l][static_cast<std::size_t>(i)];
        }
        out.plus_row[static_cast<std::size_t>(l)] = static_cast<int>(lp.rows.size());
        lp.add_row(std::move(plus), lp::Relation::LessEqual, limit + base);
        out.minus_row[static_cast<std::size_t>(l)] = static_cast<int>(lp.rows.size());
        lp.add_row(std::move(minus), lp::Relation::LessEqual, limit - base);
    }

    for (int i = 0; i < n; ++i) {
        const auto& unit = instance.units[static_cast<std::size_t>(i)];
        auto lo = row();
        lo[static_cast<std::size_t>(i)] = 1.0;
        lo[static_cast<std::size_t>(n + i)] = -unit.p_min;
        lp.add_row(std::move(lo), lp::Relation::GreaterEqual, 0.0);
        auto hi = row();
        hi[static_cast<std::size_t>(i)] = 1.0;
        hi[static_cast<std::size_t>(n + i)] = -unit.p_max;
        lp.add_row(std::move(hi), lp::Relation::LessEqual, 0.0);
    }
    return out;
}

}  // namespace

Multipliers init_multipliers(const UcInstance& instance, const NetworkModel& model,
                             double lp_tolerance, bool parallel) {
    const int horizon = instance.horizon;
    Multipliers lambda = Multipliers::zeros(instance.num_lines(), static_cast<std::size_t>(horizon));
    std::vector<int> failed(static_cast<std::size_t>(horizon), -1);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int t = 0; t < horizon; ++t) {
        PeriodLp plp = build_period_lp(instance, model, t);
        lp::LpSolution sol = lp::solve_lp(plp.problem, lp_tolerance);
        if (sol.status != lp::LpStatus::Optimal) {
            failed[static_cast<std::size_t>(t)] = t;
            continue;
        }
        // lambda0 multiplies (demand - generation), so it equals the balance
        // shadow price as-is; the <=-row duals are nonpositive and negate
        // into line multipliers >= 0.
        lambda.lambda0[static_cast<std::size_t>(t)] = sol.row_duals[static_cast<std::size_t>(plp.balance_row)];
        for (std::size_t l = 0; l < instance.num_lines(); ++l) {
            if (plp.plus_row[l] >= 0)
                lambda.lambda_plus[l][static_cast<std::size_t>(t)] =
                    std::max(0.0, -sol.row_duals[static_cast<std::size_t>(plp.plus_row[l])]);
            if (plp.minus_row[l] >= 0)
                lambda.lambda_minus[l][static_cast<std::size_t>(t)] =
                    std::max(0.0, -sol.row_duals[static_cast<std::size_t>(plp.minus_row[l])]);
        }
    }

    for (int t = 0; t < horizon; ++t)
        if (failed[static_cast<std::size_t>(t)] >= 0) throw PeriodLpInfeasible(t);
    return lambda;
}

double sum_period_lp_optima(const UcInstance& instance, const NetworkModel& model,
                            double lp_tolerance) {
    double total = 0.0;
    for (int t = 0; t < instance.horizon; ++t) {
        PeriodLp plp = build_period_lp(instance, model, t);
        lp::LpSolution sol = lp::solve_lp(plp.problem, lp_tolerance);
        if (sol.status != lp::LpStatus::Optimal) throw PeriodLpInfeasible(t);
        total += sol.objective_value;
    }
    return total;
}

}  // namespace uc
