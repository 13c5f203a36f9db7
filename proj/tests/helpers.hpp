// Shared fixtures and independent oracles for the test suites. Everything
// here recomputes results from first principles so the library under test is
// never its own referee.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "uc/lpkernel.hpp"
#include "uc/model.hpp"

namespace testutil {

// --- LP vertex-enumeration oracle -----------------------------------------
//
// Minimum over all basic points: every subset of n constraints (rows treated
// as equalities plus variable bounds) that is square and nonsingular defines
// a candidate; feasible candidates compete on the objective.

inline std::optional<double> lp_enumeration_min(const uc::lp::LpProblem& p) {
    const int n = static_cast<int>(p.num_vars());
    struct Constraint {
        std::vector<double> a;
        double rhs;
    };
    std::vector<Constraint> cons;
    for (const auto& row : p.rows) cons.push_back({row.coeffs, row.rhs});
    for (int j = 0; j < n; ++j) {
        std::vector<double> e(static_cast<std::size_t>(n), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        if (std::isfinite(p.lower[static_cast<std::size_t>(j)]))
            cons.push_back({e, p.lower[static_cast<std::size_t>(j)]});
        if (std::isfinite(p.upper[static_cast<std::size_t>(j)]))
            cons.push_back({e, p.upper[static_cast<std::size_t>(j)]});
    }
    const int m = static_cast<int>(cons.size());
    if (m < n) return std::nullopt;

    std::optional<double> best;
    std::vector<int> pick(static_cast<std::size_t>(n));
    // iterate over n-subsets of cons
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) idx[static_cast<std::size_t>(j)] = j;
    auto feasible = [&](const std::vector<double>& x) {
        const double tol = 1e-7;
        for (int j = 0; j < n; ++j) {
            if (x[static_cast<std::size_t>(j)] < p.lower[static_cast<std::size_t>(j)] - tol) return false;
            if (x[static_cast<std::size_t>(j)] > p.upper[static_cast<std::size_t>(j)] + tol) return false;
        }
        for (const auto& row : p.rows) {
            double lhs = 0.0;
            for (int j = 0; j < n; ++j)
                lhs += row.coeffs[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
            if (row.rel == uc::lp::Relation::LessEqual && lhs > row.rhs + tol) return false;
            if (row.rel == uc::lp::Relation::GreaterEqual && lhs < row.rhs - tol) return false;
            if (row.rel == uc::lp::Relation::Equal && std::abs(lhs - row.rhs) > tol) return false;
        }
        return true;
    };
    while (true) {
        uc::Matrix a(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
        std::vector<double> b(static_cast<std::size_t>(n));
        for (int r = 0; r < n; ++r) {
            a[static_cast<std::size_t>(r)] = cons[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].a;
            b[static_cast<std::size_t>(r)] = cons[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].rhs;
        }
        try {
            std::vector<double> x = uc::lp::solve_linear_system(a, b);
            if (feasible(x)) {
                double obj = 0.0;
                for (int j = 0; j < n; ++j)
                    obj += p.objective[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
                if (!best || obj < *best) best = obj;
            }
        } catch (const uc::lp::SingularMatrixError&) {
        }
        // next combination
        int r = n - 1;
        while (r >= 0 && idx[static_cast<std::size_t>(r)] == m - n + r) --r;
        if (r < 0) break;
        ++idx[static_cast<std::size_t>(r)];
        for (int s = r + 1; s < n; ++s)
            idx[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(s - 1)] + 1;
    }
    return best;
}

// --- DC power-flow reference (angle formulation) ---------------------------

inline std::vector<double> dc_angle_flows(const uc::UcInstance& instance,
                                          const std::vector<double>& p_units,
                                          const std::vector<double>& d_bus) {
    const int nb = static_cast<int>(instance.num_buses());
    int slack = instance.bus_index(instance.slack_bus);
    // bus injections
    std::vector<double> inj(static_cast<std::size_t>(nb), 0.0);
    for (std::size_t i = 0; i < instance.num_units(); ++i)
        inj[static_cast<std::size_t>(instance.bus_index(instance.units[i].bus))] += p_units[i];
    for (int m = 0; m < nb; ++m) inj[static_cast<std::size_t>(m)] -= d_bus[static_cast<std::size_t>(m)];
    // reduced susceptance system
    uc::Matrix bmat(static_cast<std::size_t>(nb), std::vector<double>(static_cast<std::size_t>(nb), 0.0));
    for (const auto& line : instance.lines) {
        int f = instance.bus_index(line.from_bus);
        int t = instance.bus_index(line.to_bus);
        double y = 1.0 / line.reactance;
        bmat[static_cast<std::size_t>(f)][static_cast<std::size_t>(f)] += y;
        bmat[static_cast<std::size_t>(t)][static_cast<std::size_t>(t)] += y;
        bmat[static_cast<std::size_t>(f)][static_cast<std::size_t>(t)] -= y;
        bmat[static_cast<std::size_t>(t)][static_cast<std::size_t>(f)] -= y;
    }
    uc::Matrix red(static_cast<std::size_t>(nb - 1), std::vector<double>(static_cast<std::size_t>(nb - 1)));
    std::vector<double> rhs(static_cast<std::size_t>(nb - 1));
    int ri = 0;
    for (int r = 0; r < nb; ++r) {
        if (r == slack) continue;
        int ci = 0;
        for (int c = 0; c < nb; ++c) {
            if (c == slack) continue;
            red[static_cast<std::size_t>(ri)][static_cast<std::size_t>(ci)] =
                bmat[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            ++ci;
        }
        rhs[static_cast<std::size_t>(ri)] = inj[static_cast<std::size_t>(r)];
        ++ri;
    }
    std::vector<double> theta_red =
        nb > 1 ? uc::lp::solve_linear_system(red, rhs) : std::vector<double>{};
    std::vector<double> theta(static_cast<std::size_t>(nb), 0.0);
    ri = 0;
    for (int r = 0; r < nb; ++r)
        if (r != slack) theta[static_cast<std::size_t>(r)] = theta_red[static_cast<std::size_t>(ri++)];
    std::vector<double> flows;
    for (const auto& line : instance.lines) {
        int f = instance.bus_index(line.from_bus);
        int t = instance.bus_index(line.to_bus);
        flows.push_back((theta[static_cast<std::size_t>(f)] - theta[static_cast<std::size_t>(t)]) /
                        line.reactance);
    }
    return flows;
}

// --- random instance generators --------------------------------------------

// Spanning tree plus extra chords; guaranteed connected.
inline uc::UcInstance random_instance(std::mt19937& rng, int n_units, int horizon, int n_lines,
                                      int n_buses, double peak_fraction,
                                      bool generous_limits = true, bool zero_startup = false) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    uc::UcInstance inst;
    inst.horizon = horizon;
    for (int b = 0; b < n_buses; ++b) inst.buses.push_back("b" + std::to_string(b + 1));
    inst.slack_bus = inst.buses.front();

    int line_no = 0;
    auto add_line = [&](int f, int t, double limit) {
        uc::TransmissionLine line;
        line.id = "L" + std::to_string(++line_no);
        line.from_bus = inst.buses[static_cast<std::size_t>(f)];
        line.to_bus = inst.buses[static_cast<std::size_t>(t)];
        line.reactance = 0.05 + 0.5 * u01(rng);
        line.limit = limit;
        inst.lines.push_back(line);
    };
    for (int b = 1; b < n_buses; ++b) {
        int parent = static_cast<int>(u01(rng) * b);
        add_line(parent, b, uc::kUnlimited);
    }
    while (static_cast<int>(inst.num_lines()) < n_lines) {
        int f = static_cast<int>(u01(rng) * n_buses);
        int t = static_cast<int>(u01(rng) * n_buses);
        if (f == t) continue;
        double limit = u01(rng) < 0.4 ? uc::kUnlimited : (generous_limits ? 200.0 + 400.0 * u01(rng)
                                                                          : 30.0 + 80.0 * u01(rng));
        add_line(f, t, limit);
    }

    double capacity = 0.0;
    for (int i = 0; i < n_units; ++i) {
        uc::GeneratingUnit unit;
        unit.id = "U" + std::to_string(i + 1);
        unit.bus = inst.buses[static_cast<std::size_t>(static_cast<int>(u01(rng) * n_buses))];
        unit.p_min = 5.0 + 20.0 * u01(rng);
        unit.p_max = unit.p_min + 30.0 + 70.0 * u01(rng);
        unit.cost_a = 1.0 + 20.0 * u01(rng);
        unit.cost_b = 50.0 * u01(rng);
        unit.startup_cost = zero_startup ? 0.0 : 30.0 * u01(rng);
        unit.ramp_up = unit.ramp_down = unit.p_max;  // generous hourly ramps
        unit.startup_ramp = unit.shutdown_ramp = unit.p_max;
        unit.min_up = 1 + static_cast<int>(u01(rng) * 2.0);
        unit.min_down = 1 + static_cast<int>(u01(rng) * 2.0);
        unit.init_on = u01(rng) < 0.5;
        unit.init_duration = std::max(unit.min_up, unit.min_down);
        if (unit.init_on) unit.init_power = unit.p_min + (unit.p_max - unit.p_min) * u01(rng);
        capacity += unit.p_max;
        inst.units.push_back(unit);
    }

    double peak = peak_fraction * capacity;
    int n_loads = 1 + static_cast<int>(u01(rng) * std::min(3, n_buses));
    std::vector<double> share(static_cast<std::size_t>(n_loads));
    double total_share = 0.0;
    for (auto& s : share) {
        s = 0.2 + u01(rng);
        total_share += s;
    }
    for (int j = 0; j < n_loads; ++j) {
        uc::LoadProfile load;
        load.bus = inst.buses[static_cast<std::size_t>(static_cast<int>(u01(rng) * n_buses))];
        double bus_peak = peak * share[static_cast<std::size_t>(j)] / total_share;
        for (int t = 0; t < horizon; ++t)
            load.demand.push_back(bus_peak * (0.55 + 0.45 * u01(rng)));
        inst.loads.push_back(load);
    }
    return inst;
}

// --- exhaustive min-up/down string oracle ----------------------------------

// All length-T strings accepted by the run-length rules, generated by
// filtering every bitmask (independent of both library implementations).
inline std::vector<unsigned> bitmask_feasible_strings(int horizon, int min_up, int min_down,
                                                      bool init_on, int init_duration) {
    std::vector<unsigned> out;
    for (unsigned mask = 0; mask < (1u << horizon); ++mask) {
        bool ok = true;
        int init_state = init_on ? 1 : 0;
        int first = (mask >> 0) & 1u;
        auto need = [&](int s) { return s == 1 ? min_up : min_down; };
        if (first != init_state && init_duration < need(init_state)) ok = false;
        int t = 0;
        while (ok && t < horizon) {
            int state = static_cast<int>((mask >> t) & 1u);
            int begin = t;
            while (t < horizon && static_cast<int>((mask >> t) & 1u) == state) ++t;
            int len = t - begin;
            if (begin == 0 && state == init_state) len += init_duration;
            if (t == horizon) break;  // trailing run exempt
            if (len < need(state)) ok = false;
        }
        if (ok) out.push_back(mask);
    }
    return out;
}

inline unsigned row_to_mask(const std::vector<int>& row) {
    unsigned mask = 0;
    for (std::size_t t = 0; t < row.size(); ++t)
        if (row[t]) mask |= 1u << t;
    return mask;
}

}  // namespace testutil
