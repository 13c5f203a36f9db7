#pragma once

#include <set>
#include <tuple>

#include "uc/model.hpp"

namespace uc {

enum class FlowDirection { Plus, Minus };

// (line, period, direction) triples of line constraints kept in the
// feasibility-testing problem.
using RetainedSet = std::set<std::tuple<int, int, FlowDirection>>;

struct NetworkModel {
    Matrix gamma_unit;  // L x N, PTDF of unit injections
    Matrix gamma_load;  // L x M, PTDF of bus withdrawals
    Matrix gamma_bus;   // L x B, bus-level PTDF, slack column zero
    std::string slack_bus;
};

// Bus-level PTDF from the reduced susceptance matrix; throws on a
// disconnected network (singular reduced matrix).
NetworkModel compute_ptdf(const UcInstance& instance);

// flow_l = sum_i gamma_unit[l][i] p_i - sum_m gamma_load[l][m] d_m
std::vector<double> line_flows(const NetworkModel& model, const std::vector<double>& p_t,
                               const std::vector<double>& d_t);

// Interval screening over the dispatch box [z*p_min, z*p_max]: a triple is
// dropped when its worst-case flow cannot exceed the limit. Safe superset of
// the active constraints.
RetainedSet screen_constraints(const UcInstance& instance, const NetworkModel& model,
                               const IntMatrix& z_fixed, bool parallel = true);

// Every (l, t, dir) triple of an instance.
RetainedSet full_retained_set(const UcInstance& instance);

}  // namespace uc
