#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "uc/driver.hpp"
#include "uc/feasibility.hpp"
#include "uc/network.hpp"
#include "uc/nstd.hpp"
#include "uc/oracle.hpp"

using namespace uc;

TEST_CASE("feasible commitment yields zero violation and the hand dispatch") {
    UcInstance mc1 = make_mc1();
    NetworkModel model = compute_ptdf(mc1);
    SolverConfig config;
    IntMatrix z = {{1, 1}, {1, 1}};
    FeasibilityResult result =
        run_feasibility_test(mc1, model, z, config, full_retained_set(mc1));
    CHECK(result.feasible);
    CHECK(result.total_violation == doctest::Approx(0.0));
    CHECK(max_constraint_residual(mc1, Schedule{z, result.dispatch}) <= 1e-6);

    // The cheap unit is line-capped at 30, the expensive one covers the rest.
    Matrix p = economic_dispatch(mc1, model, z, full_retained_set(mc1), result.violation, 1e-8);
    for (int t = 0; t < 2; ++t) {
        CHECK(p[0][static_cast<std::size_t>(t)] == doctest::Approx(30.0));
        CHECK(p[1][static_cast<std::size_t>(t)] == doctest::Approx(10.0));
    }
}

TEST_CASE("line overload is measured by the line slack") {
    UcInstance mc1 = make_mc1();
    NetworkModel model = compute_ptdf(mc1);
    SolverConfig config;
    IntMatrix z = {{1, 1}, {0, 0}};  // only the far-side unit
    FeasibilityResult result =
        run_feasibility_test(mc1, model, z, config, full_retained_set(mc1));
    CHECK(!result.feasible);
    // 10 MW per period has to land in slacks: either the line overload beyond
    // the 30 MW limit or the balance deficit, depending on where p sits.
    CHECK(result.total_violation == doctest::Approx(20.0));
    for (std::size_t t = 0; t < 2; ++t) {
        double p = result.dispatch[0][t];
        CHECK(result.violation.v0_plus[t] == doctest::Approx(40.0 - p).epsilon(1e-8));
        CHECK(result.violation.vl_plus[0][t] ==
              doctest::Approx(std::max(0.0, p - 30.0)).epsilon(1e-8));
        CHECK(result.violation.v0_minus[t] == doctest::Approx(0.0));
    }

    Multipliers g = extract_subgradient(result.violation);
    CHECK(g.lambda0[0] + g.lambda_plus[0][0] == doctest::Approx(10.0));
    CHECK(g.lambda_minus[0][0] == doctest::Approx(0.0));
}

TEST_CASE("all-off commitment parks the demand in balance slacks") {
    UcInstance mc1 = make_mc1();
    NetworkModel model = compute_ptdf(mc1);
    SolverConfig config;
    IntMatrix z = {{0, 0}, {0, 0}};
    FeasibilityResult result =
        run_feasibility_test(mc1, model, z, config, screen_constraints(mc1, model, z));
    CHECK(result.total_violation == doctest::Approx(80.0));
    CHECK(result.violation.v0_plus[0] == doctest::Approx(40.0));
    CHECK(result.dispatch[0][0] == 0.0);
}

TEST_CASE("constructed LP has the documented shape") {
    UcInstance mc1 = make_mc1();
    NetworkModel model = compute_ptdf(mc1);
    IntMatrix z = {{1, 1}, {1, 1}};
    FeasibilityLp flp = build_feasibility_lp(mc1, model, z, full_retained_set(mc1));
    // 4 dispatch + 4 balance slacks + 4 line slacks
    CHECK(flp.problem.num_vars() == 12);
    // 2 balance + 4 line rows; generous ramps produce no ramp rows
    CHECK(flp.problem.rows.size() == 6);

    FeasibilityLp empty = build_feasibility_lp(mc1, model, z, {});
    CHECK(empty.problem.num_vars() == 8);
    CHECK(empty.problem.rows.size() == 2);
}

TEST_CASE("subgradient maps a pure balance deficit") {
    ViolationVector violation;
    violation.v0_plus = {5.0, 0.0};
    violation.v0_minus = {0.0, 1.5};
    violation.vl_plus = {{0.0, 0.0}};
    violation.vl_minus = {{0.0, 0.0}};
    Multipliers g = extract_subgradient(violation);
    CHECK(g.lambda0[0] == doctest::Approx(5.0));
    CHECK(g.lambda0[1] == doctest::Approx(-1.5));
    CHECK(violation.total() == doctest::Approx(6.5));
}

TEST_CASE("slack LP stays feasible for any min-up/down-feasible commitment") {
    std::mt19937 rng(661);
    std::uniform_int_distribution<int> bit(0, 1);
    SolverConfig config;
    for (int trial = 0; trial < 40; ++trial) {
        UcInstance inst = testutil::random_instance(rng, 3, 4, 5, 3, 0.7, false);
        NetworkModel model = compute_ptdf(inst);
        IntMatrix trial_z(inst.num_units(), std::vector<int>(4));
        for (auto& row : trial_z)
            for (auto& v : row) v = bit(rng);
        AdjustResult adjusted = adjust_schedule(inst, trial_z);
        CHECK_NOTHROW(run_feasibility_test(inst, model, adjusted.z, config,
                                           screen_constraints(inst, model, adjusted.z)));
    }
}

TEST_CASE("zero violation implies an independently verified schedule") {
    std::mt19937 rng(662);
    SolverConfig config;
    int verified = 0;
    for (int trial = 0; trial < 40; ++trial) {
        UcInstance inst = testutil::random_instance(rng, 3, 4, 5, 3, 0.6);
        NetworkModel model = compute_ptdf(inst);
        IntMatrix z(inst.num_units(), std::vector<int>(4, 1));
        bool legal = true;
        for (std::size_t i = 0; i < inst.num_units(); ++i)
            if (!check_min_up_down(z[i], inst.units[i])) legal = false;
        if (!legal) continue;
        FeasibilityResult result =
            run_feasibility_test(inst, model, z, config, full_retained_set(inst));
        if (result.total_violation > 0.0) continue;
        Schedule schedule{z, result.dispatch};
        CHECK(max_constraint_residual(inst, schedule) <= 1e-6);
        ++verified;
    }
    CHECK(verified > 5);
}

TEST_CASE("economic dispatch never costs more than the slack dispatch") {
    UcInstance mc1 = make_mc1();
    NetworkModel model = compute_ptdf(mc1);
    SolverConfig config;
    IntMatrix z = {{1, 1}, {1, 1}};
    RetainedSet retained = full_retained_set(mc1);
    FeasibilityResult feas = run_feasibility_test(mc1, model, z, config, retained);
    Matrix p = economic_dispatch(mc1, model, z, retained, feas.violation, 1e-8);
    auto fuel = [&](const Matrix& d) {
        double cost = 0.0;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t t = 0; t < 2; ++t) cost += mc1.units[i].cost_a * d[i][t];
        return cost;
    };
    CHECK(fuel(p) <= fuel(feas.dispatch) + 1e-9);
    CHECK(max_constraint_residual(mc1, Schedule{z, p}) <= 1e-6);
}

TEST_CASE("economic dispatch enforces the slack budget") {
    UcInstance mc1 = make_mc1();
    NetworkModel model = compute_ptdf(mc1);
    RetainedSet retained = full_retained_set(mc1);
    IntMatrix z = {{1, 1}, {0, 0}};  // needs 10 MW of line slack per period
    ViolationVector zero;
    zero.v0_plus.assign(2, 0.0);
    zero.v0_minus.assign(2, 0.0);
    zero.vl_plus = {{0.0, 0.0}};
    zero.vl_minus = {{0.0, 0.0}};
    CHECK_THROWS(economic_dispatch(mc1, model, z, retained, zero, 1e-8));

    ViolationVector budget = zero;
    budget.vl_plus = {{10.0, 10.0}};
    Matrix p = economic_dispatch(mc1, model, z, retained, budget, 1e-8);
    CHECK(p[0][0] == doctest::Approx(40.0));
}

TEST_CASE("ramp rows bind across committed periods") {
    UcInstance inst;
    inst.horizon = 2;
    inst.buses = {"b1"};
    inst.slack_bus = "b1";
    GeneratingUnit unit;
    unit.id = "u";
    unit.bus = "b1";
    unit.p_min = 10.0;
    unit.p_max = 100.0;
    unit.cost_a = 1.0;
    unit.ramp_up = 20.0;
    unit.ramp_down = 20.0;
    unit.startup_ramp = 50.0;
    unit.shutdown_ramp = 50.0;
    unit.init_on = true;
    unit.init_duration = 1;
    unit.init_power = 30.0;
    inst.units = {unit};
    inst.loads = {LoadProfile{"b1", {50.0, 100.0}}};
    NetworkModel model = compute_ptdf(inst);
    SolverConfig config;
    IntMatrix z = {{1, 1}};
    FeasibilityResult result =
        run_feasibility_test(inst, model, z, config, full_retained_set(inst));
    // first period capped at init 30 + 20; second at 50 + 20 -> deficit 30
    CHECK(result.dispatch[0][0] == doctest::Approx(50.0));
    CHECK(result.dispatch[0][1] == doctest::Approx(70.0));
    CHECK(result.violation.v0_plus[1] == doctest::Approx(30.0));
    CHECK(result.total_violation == doctest::Approx(30.0).epsilon(1e-9).scale(1.0));
}

TEST_CASE("impossible first-period shutdown is reported infeasible") {
    UcInstance inst;
    inst.horizon = 1;
    inst.buses = {"b1"};
    inst.slack_bus = "b1";
    GeneratingUnit unit;
    unit.id = "u";
    unit.bus = "b1";
    unit.p_min = 10.0;
    unit.p_max = 100.0;
    unit.shutdown_ramp = 20.0;
    unit.init_on = true;
    unit.init_duration = 5;
    unit.init_power = 80.0;  // cannot drop to 0 within the shutdown ramp
    inst.units = {unit};
    inst.loads = {LoadProfile{"b1", {0.0}}};
    NetworkModel model = compute_ptdf(inst);
    SolverConfig config;
    IntMatrix z = {{0}};
    CHECK_THROWS(run_feasibility_test(inst, model, z, config, {}));
}
