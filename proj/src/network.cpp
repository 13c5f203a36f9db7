#include "uc/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uc/lpkernel.hpp"

namespace uc {

NetworkModel compute_ptdf(const UcInstance& instance) {
    const int nbus = static_cast<int>(instance.num_buses());
    const int nline = static_cast<int>(instance.num_lines());
    const int slack = instance.bus_index(instance.slack_bus);
    if (slack < 0) throw std::invalid_argument("slack bus does not resolve");

    // Bus susceptance matrix.
    Matrix bmat(static_cast<std::size_t>(nbus), std::vector<double>(static_cast<std::size_t>(nbus), 0.0));
    for (const auto& line : instance.lines) {
        int f = instance.bus_index(line.from_bus);
        int t = instance.bus_index(line.to_bus);
        double b = 1.0 / line.reactance;
        bmat[f][f] += b;
        bmat[t][t] += b;
        bmat[f][t] -= b;
        bmat[t][f] -= b;
    }

    // Reduced system: slack row/column removed.
    std::vector<int> keep;
    for (int i = 0; i < nbus; ++i)
        if (i != slack) keep.push_back(i);
    const int nred = static_cast<int>(keep.size());
    Matrix bred(static_cast<std::size_t>(nred), std::vector<double>(static_cast<std::size_t>(nred), 0.0));
    for (int i = 0; i < nred; ++i)
        for (int j = 0; j < nred; ++j) bred[i][j] = bmat[keep[i]][keep[j]];

    NetworkModel model;
    model.slack_bus = instance.slack_bus;
    model.gamma_bus.assign(static_cast<std::size_t>(nline), std::vector<double>(static_cast<std::size_t>(nbus), 0.0));

    // One reduced solve per non-slack bus: angles for a unit injection there
    // (withdrawn at the slack), then line sensitivities from angle differences.
    for (int k = 0; k < nred; ++k) {
        std::vector<double> e(static_cast<std::size_t>(nred), 0.0);
        e[k] = 1.0;
        std::vector<double> theta_red;
        try {
            theta_red = lp::solve_linear_system(bred, e);
        } catch (const lp::SingularMatrixError&) {
            throw std::runtime_error("disconnected network: reduced susceptance matrix singular");
        }
        std::vector<double> theta(static_cast<std::size_t>(nbus), 0.0);
        for (int i = 0; i < nred; ++i) theta[keep[i]] = theta_red[i];
        for (int l = 0; l < nline; ++l) {
            const auto& line = instance.lines[static_cast<std::size_t>(l)];
            int f = instance.bus_index(line.from_bus);
            int t = instance.bus_index(line.to_bus);
            model.gamma_bus[l][keep[k]] = (theta[f] - theta[t]) / line.reactance;
        }
    }

    model.gamma_load = model.gamma_bus;
    model.gamma_unit.assign(static_cast<std::size_t>(nline),
                            std::vector<double>(instance.num_units(), 0.0));
    for (std::size_t i = 0; i < instance.num_units(); ++i) {
        int bus = instance.bus_index(instance.units[i].bus);
        for (int l = 0; l < nline; ++l) model.gamma_unit[l][i] = model.gamma_bus[l][bus];
    }
    return model;
}

std::vector<double> line_flows(const NetworkModel& model, const std::vector<double>& p_t,
                               const std::vector<double>& d_t) {
    const std::size_t nline = model.gamma_unit.size();
    if (nline > 0 &&
        (p_t.size() != model.gamma_unit[0].size() || d_t.size() != model.gamma_load[0].size()))
        throw std::invalid_argument("line_flows: dimension mismatch");
    std::vector<double> flows(nline, 0.0);
    for (std::size_t l = 0; l < nline; ++l) {
        double f = 0.0;
        for (std::size_t i = 0; i < p_t.size(); ++i) f += model.gamma_unit[l][i] * p_t[i];
        for (std::size_t m = 0; m < d_t.size(); ++m) f -= model.gamma_load[l][m] * d_t[m];
        flows[l] = f;
    }
    return flows;
}

RetainedSet full_retained_set(const UcInstance& instance) {
    RetainedSet retained;
    for (int l = 0; l < static_cast<int>(instance.num_lines()); ++l) {
        if (!std::isfinite(instance.lines[static_cast<std::size_t>(l)].limit)) continue;
        for (int t = 0; t < instance.horizon; ++t) {
            retained.insert({l, t, FlowDirection::Plus});
            retained.insert({l, t, FlowDirection::Minus});
        }
    }
    return retained;
}

RetainedSet screen_constraints(const UcInstance& instance, const NetworkModel& model,
                               const IntMatrix& z_fixed, bool parallel) {
    const int nline = static_cast<int>(instance.num_lines());
    const int horizon = instance.horizon;
    std::vector<RetainedSet> per_line(static_cast<std::size_t>(nline));

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int l = 0; l < nline; ++l) {
        const auto& line = instance.lines[static_cast<std::size_t>(l)];
        if (!std::isfinite(line.limit)) continue;  // unlimited: never binding
        for (int t = 0; t < horizon; ++t) {
            std::vector<double> d = instance.bus_demand(t);
            double base = 0.0;
            for (std::size_t m = 0; m < d.size(); ++m) base += model.gamma_load[l][m] * d[m];
            double hi = 0.0;  // max of sum gamma*p over the dispatch box
            double lo = 0.0;
            for (std::size_t i = 0; i < instance.num_units(); ++i) {
                if (!z_fixed[i][static_cast<std::size_t>(t)]) continue;
                double g = model.gamma_unit[l][i];
                const auto& u = instance.units[i];
                hi += std::max(g * u.p_min, g * u.p_max);
                lo += std::min(g * u.p_min, g * u.p_max);
            }
            if (hi - base > line.limit)
                per_line[static_cast<std::size_t>(l)].insert({l, t, FlowDirection::Plus});
            if (-(lo - base) > line.limit)
                per_line[static_cast<std::size_t>(l)].insert({l, t, FlowDirection::Minus});
        }
    }

    RetainedSet retained;
    for (const auto& s : per_line) retained.insert(s.begin(), s.end());
    return retained;
}

}  // namespace uc
