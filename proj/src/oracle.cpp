#include "uc/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "uc/feasibility.hpp"
#include "uc/lagrangian.hpp"

namespace uc {

UcInstance make_mc1() {
    UcInstance mc1;
    mc1.horizon = 2;
    mc1.buses = {"b1", "b2"};
    mc1.slack_bus = "b2";
    mc1.lines = {TransmissionLine{"L1", "b1", "b2", 1.0, 30.0}};
    GeneratingUnit u1;
    u1.id = "U1";
    u1.bus = "b1";
    u1.p_min = 10.0;
    u1.p_max = 60.0;
    u1.cost_a = 1.0;
    GeneratingUnit u2 = u1;
    u2.id = "U2";
    u2.bus = "b2";
    u2.cost_a = 2.0;
    mc1.units = {u1, u2};
    mc1.loads = {LoadProfile{"b2", {40.0, 40.0}}};
    return mc1;
}

namespace {

void generate(std::vector<std::vector<int>>& out, std::vector<int>& row, int pos, int horizon,
              int state, int run_len, const GeneratingUnit& unit) {
    if (pos == horizon) {
        out.push_back(row);
        return;
    }
    int req = state == 1 ? unit.min_up : unit.min_down;
    // Extend the current run.
    row[static_cast<std::size_t>(pos)] = state;
    generate(out, row, pos + 1, horizon, state, run_len + 1, unit);
    // Switch, closing the current run; only legal once it is complete.
    if (run_len >= req) {
        row[static_cast<std::size_t>(pos)] = 1 - state;
        generate(out, row, pos + 1, horizon, 1 - state, 1, unit);
    }
}

}  // namespace

std::vector<std::vector<int>> enumerate_feasible_strings(const GeneratingUnit& unit, int horizon) {
    if (horizon > 16) throw std::invalid_argument("enumerate_feasible_strings: horizon > 16");
    std::vector<std::vector<int>> out;
    std::vector<int> row(static_cast<std::size_t>(horizon), 0);
    generate(out, row, 0, horizon, unit.init_on ? 1 : 0, unit.init_duration, unit);
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<OracleResult> brute_force_uc(const UcInstance& instance, long long max_combinations) {
    const int n = static_cast<int>(instance.num_units());
    std::vector<std::vector<std::vector<int>>> strings(static_cast<std::size_t>(n));
    long long combos = 1;
    for (int i = 0; i < n; ++i) {
        strings[static_cast<std::size_t>(i)] =
            enumerate_feasible_strings(instance.units[static_cast<std::size_t>(i)], instance.horizon);
        combos *= static_cast<long long>(strings[static_cast<std::size_t>(i)].size());
        if (combos > max_combinations) throw OracleBoundExceeded(combos);
    }

    NetworkModel model = compute_ptdf(instance);
    RetainedSet retained = full_retained_set(instance);
    ViolationVector zero;
    zero.v0_plus.assign(static_cast<std::size_t>(instance.horizon), 0.0);
    zero.v0_minus = zero.v0_plus;
    zero.vl_plus.assign(instance.num_lines(),
                        std::vector<double>(static_cast<std::size_t>(instance.horizon), 0.0));
    zero.vl_minus = zero.vl_plus;

    bool found = false;
    double best_cost = 0.0;
    IntMatrix best_z;
    Matrix best_p;

#pragma omp parallel
    {
        bool local_found = false;
        double local_cost = 0.0;
        IntMatrix local_z;
        Matrix local_p;

#pragma omp for schedule(dynamic, 16)
        for (long long combo = 0; combo < combos; ++combo) {
            IntMatrix z(static_cast<std::size_t>(n));
            long long rest = combo;
            for (int i = 0; i < n; ++i) {
                const auto& list = strings[static_cast<std::size_t>(i)];
                z[static_cast<std::size_t>(i)] = list[static_cast<std::size_t>(rest % static_cast<long long>(list.size()))];
                rest /= static_cast<long long>(list.size());
            }

            // Cheap per-period capacity prefilter.
            bool maybe = true;
            for (int t = 0; t < instance.horizon && maybe; ++t) {
                double cap_hi = 0.0, cap_lo = 0.0;
                for (int i = 0; i < n; ++i)
                    if (z[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]) {
                        cap_hi += instance.units[static_cast<std::size_t>(i)].p_max;
                        cap_lo += instance.units[static_cast<std::size_t>(i)].p_min;
                    }
                double demand = instance.total_demand(t);
                if (cap_hi < demand - 1e-9 || cap_lo > demand + 1e-9) maybe = false;
            }
            if (!maybe) continue;

            Matrix p;
            try {
                p = economic_dispatch(instance, model, z, retained, zero, 1e-9);
            } catch (const std::runtime_error&) {
                continue;  // no zero-slack dispatch for this commitment
            }

            double cost = 0.0;
            for (int i = 0; i < n; ++i) {
                const auto& unit = instance.units[static_cast<std::size_t>(i)];
                cost += startup_cost_of_row(z[static_cast<std::size_t>(i)], unit);
                for (int t = 0; t < instance.horizon; ++t)
                    cost += unit.cost_a * p[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] +
                            unit.cost_b * z[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
            }
            if (!local_found || cost < local_cost - 1e-9 ||
                (cost < local_cost + 1e-9 && z < local_z)) {
                local_found = true;
                local_cost = cost;
                local_z = z;
                local_p = p;
            }
        }

#pragma omp critical
        {
            if (local_found &&
                (!found || local_cost < best_cost - 1e-9 ||
                 (local_cost < best_cost + 1e-9 && local_z < best_z))) {
                found = true;
                best_cost = local_cost;
                best_z = local_z;
                best_p = local_p;
            }
        }
    }

    if (!found) return std::nullopt;
    OracleResult result;
    result.cost = best_cost;
    result.schedule.z = std::move(best_z);
    result.schedule.p = std::move(best_p);
    return result;
}

}  // namespace uc
