#include "uc/driver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "uc/feasibility.hpp"
#include "uc/lagrangian.hpp"
#include "uc/network.hpp"
#include "uc/nstd.hpp"
#include "uc/stepsize.hpp"

namespace uc {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

CostReport compute_cost(const Schedule& schedule, const std::vector<GeneratingUnit>& units) {
    CostReport report;
    for (std::size_t i = 0; i < units.size(); ++i) {
        report.startup_cost += startup_cost_of_row(schedule.z[i], units[i]);
        for (std::size_t t = 0; t < schedule.z[i].size(); ++t)
            report.fuel_cost +=
                units[i].cost_a * schedule.p[i][t] + units[i].cost_b * schedule.z[i][t];
    }
    report.total_cost = report.startup_cost + report.fuel_cost;
    return report;
}

double normalized_cost(double solution_cost, double reference_cost) {
    if (!(reference_cost > 0.0)) throw std::invalid_argument("normalized_cost: reference <= 0");
    return solution_cost / reference_cost;
}

double max_constraint_residual(const UcInstance& instance, const Schedule& schedule) {
    NetworkModel model = compute_ptdf(instance);
    double worst = 0.0;
    const int n = static_cast<int>(instance.num_units());

    for (int i = 0; i < n; ++i)
        if (!check_min_up_down(schedule.z[static_cast<std::size_t>(i)],
                               instance.units[static_cast<std::size_t>(i)]))
            worst = std::max(worst, 1.0);

    for (int t = 0; t < instance.horizon; ++t) {
        std::vector<double> p_t(static_cast<std::size_t>(n));
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            p_t[static_cast<std::size_t>(i)] =
                schedule.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
            total += p_t[static_cast<std::size_t>(i)];
        }
        worst = std::max(worst, std::abs(total - instance.total_demand(t)));

        std::vector<double> flows = line_flows(model, p_t, instance.bus_demand(t));
        for (std::size_t l = 0; l < instance.num_lines(); ++l) {
            double limit = instance.lines[l].limit;
            if (!std::isfinite(limit)) continue;
            worst = std::max(worst, flows[l] - limit);
            worst = std::max(worst, -flows[l] - limit);
        }

        for (int i = 0; i < n; ++i) {
            const auto& unit = instance.units[static_cast<std::size_t>(i)];
            int z = schedule.z[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
            double p = p_t[static_cast<std::size_t>(i)];
            worst = std::max(worst, z * unit.p_min - p);
            worst = std::max(worst, p - z * unit.p_max);
            int zp = t == 0 ? (unit.init_on ? 1 : 0)
                            : schedule.z[static_cast<std::size_t>(i)][static_cast<std::size_t>(t - 1)];
            double pp = t == 0 ? (unit.init_on ? unit.init_power : 0.0)
                               : schedule.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(t - 1)];
            double up = unit.ramp_up * zp + unit.startup_ramp * (1 - zp);
            double dn = unit.ramp_down * z + unit.shutdown_ramp * (1 - z);
            if (std::isfinite(up)) worst = std::max(worst, (p - pp) - up);
            if (std::isfinite(dn)) worst = std::max(worst, (pp - p) - dn);
        }
    }
    return worst;
}

SolveResult solve_schedule(const UcInstance& instance, const SolverConfig& config,
                           std::optional<double> c0_override) {
    auto t_total = std::chrono::steady_clock::now();
    SolveResult result;

    NetworkModel model = compute_ptdf(instance);

    auto t_init = std::chrono::steady_clock::now();
    Multipliers lambda;
    try {
        lambda = init_multipliers(instance, model, config.lp_tolerance, config.parallel);
    } catch (const PeriodLpInfeasible& e) {
        result.status = SolveStatus::InstanceInfeasible;
        result.infeasible_period = e.period;
        result.timings.total_ms = ms_since(t_total);
        return result;
    }
    result.timings.init_ms = ms_since(t_init);

    StepSchedule schedule_rule;
    for (int k = 0; k < config.max_iterations; ++k) {
        auto t_stage = std::chrono::steady_clock::now();
        BetaTable beta = compute_beta(instance, model, lambda);
        IntMatrix z_trial = trial_uc(beta);
        result.timings.trial_ms += ms_since(t_stage);

        t_stage = std::chrono::steady_clock::now();
        AdjustResult adjusted = adjust_schedule(instance, z_trial, config.parallel);
        result.timings.adjust_ms += ms_since(t_stage);

        t_stage = std::chrono::steady_clock::now();
        RetainedSet retained = config.enable_screening
                                   ? screen_constraints(instance, model, adjusted.z, config.parallel)
                                   : full_retained_set(instance);
        FeasibilityResult feas = run_feasibility_test(instance, model, adjusted.z, config, retained);
        result.timings.feasibility_ms += ms_since(t_stage);

        result.violation_history.push_back(feas.total_violation);
        result.iterations = k + 1;
        result.schedule.z = adjusted.z;
        result.schedule.p = feas.dispatch;

        if (feas.feasible) {
            // Zero-slack (up to the remaining violation budget) re-dispatch
            // for cost at the fixed commitment.
            result.schedule.p = economic_dispatch(instance, model, adjusted.z, retained,
                                                  feas.violation, config.lp_tolerance);
            result.status = SolveStatus::Feasible;
            result.cost = compute_cost(result.schedule, instance.units);
            result.timings.total_ms = ms_since(t_total);
            return result;
        }

        t_stage = std::chrono::steady_clock::now();
        Multipliers g = extract_subgradient(feas.violation);
        if (k == 0) {
            result.c0_used = c0_override ? *c0_override
                                         : optimize_c0(instance, model, lambda, g, beta, config);
            schedule_rule.c0 = result.c0_used;
        }
        lambda = update_multipliers(lambda, g, schedule_rule.at(k + 1));
        result.timings.update_ms += ms_since(t_stage);
    }

    result.status = SolveStatus::IterationLimit;
    result.cost = compute_cost(result.schedule, instance.units);
    result.timings.total_ms = ms_since(t_total);
    return result;
}

}  // namespace uc
