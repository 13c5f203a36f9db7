#include "uc/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace uc {

int UcInstance::bus_index(const std::string& bus) const {
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i] == bus) return static_cast<int>(i);
    return -1;
}

double UcInstance::total_demand(int t) const {
    double sum = 0.0;
    for (const auto& load : loads) sum += load.demand.at(static_cast<std::size_t>(t));
    return sum;
}

std::vector<double> UcInstance::bus_demand(int t) const {
    std::vector<double> d(buses.size(), 0.0);
    for (const auto& load : loads) {
        int m = bus_index(load.bus);
        if (m >= 0) d[static_cast<std::size_t>(m)] += load.demand.at(static_cast<std::size_t>(t));
    }
    return d;
}

Multipliers Multipliers::zeros(std::size_t num_lines, std::size_t horizon) {
    Multipliers lambda;
    lambda.lambda0.assign(horizon, 0.0);
    lambda.lambda_plus.assign(num_lines, std::vector<double>(horizon, 0.0));
    lambda.lambda_minus.assign(num_lines, std::vector<double>(horizon, 0.0));
    return lambda;
}

namespace {

bool connected(const UcInstance& instance) {
    if (instance.buses.empty()) return false;
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& line : instance.lines) {
        adj[line.from_bus].push_back(line.to_bus);
        adj[line.to_bus].push_back(line.from_bus);
    }
    std::set<std::string> seen;
    std::queue<std::string> frontier;
    frontier.push(instance.buses.front());
    seen.insert(instance.buses.front());
    while (!frontier.empty()) {
        std::string bus = frontier.front();
        frontier.pop();
        for (const auto& next : adj[bus])
            if (seen.insert(next).second) frontier.push(next);
    }
    return seen.size() == instance.buses.size();
}

}  // namespace

std::vector<std::string> validate_instance(const UcInstance& instance) {
    std::vector<std::string> violations;
    auto fail = [&violations](const std::string& entity, const std::string& rule) {
        violations.push_back(entity + ": " + rule);
    };

    if (instance.horizon < 1) fail("instance", "horizon >= 1");

    std::set<std::string> bus_set(instance.buses.begin(), instance.buses.end());
    if (bus_set.size() != instance.buses.size()) fail("instance", "bus ids unique");
    if (!bus_set.count(instance.slack_bus)) fail("instance", "slack bus resolves");

    std::set<std::string> unit_ids;
    for (const auto& u : instance.units) {
        if (!unit_ids.insert(u.id).second) fail(u.id, "unit id unique");
        if (!(u.p_min > 0.0)) fail(u.id, "p_min > 0");
        if (!(u.p_min <= u.p_max)) fail(u.id, "p_min <= p_max");
        if (u.ramp_up < 0.0) fail(u.id, "ramp_up >= 0");
        if (u.ramp_down < 0.0) fail(u.id, "ramp_down >= 0");
        if (u.min_up < 1) fail(u.id, "min_up >= 1");
        if (u.min_down < 1) fail(u.id, "min_down >= 1");
        if (!(u.startup_ramp >= u.p_min)) fail(u.id, "startup_ramp >= p_min");
        if (!(u.shutdown_ramp >= u.p_min)) fail(u.id, "shutdown_ramp >= p_min");
        if (u.init_duration < 1) fail(u.id, "init_duration >= 1");
        if (u.init_on && !(u.p_min <= u.init_power && u.init_power <= u.p_max))
            fail(u.id, "p_min <= init_power <= p_max");
        if (!bus_set.count(u.bus)) fail(u.id, "bus resolves");
    }

    std::set<std::string> line_ids;
    for (const auto& line : instance.lines) {
        if (!line_ids.insert(line.id).second) fail(line.id, "line id unique");
        if (!(line.limit > 0.0)) fail(line.id, "limit > 0");
        if (line.reactance == 0.0) fail(line.id, "reactance != 0");
        if (line.from_bus == line.to_bus) fail(line.id, "from_bus != to_bus");
        if (!bus_set.count(line.from_bus)) fail(line.id, "from_bus resolves");
        if (!bus_set.count(line.to_bus)) fail(line.id, "to_bus resolves");
    }

    for (const auto& load : instance.loads) {
        if (!bus_set.count(load.bus)) fail("load@" + load.bus, "bus resolves");
        if (static_cast<int>(load.demand.size()) != instance.horizon)
            fail("load@" + load.bus, "demand length == horizon");
        for (double d : load.demand)
            if (d < 0.0) { fail("load@" + load.bus, "demand >= 0"); break; }
    }

    if (!instance.buses.empty() && !connected(instance)) fail("instance", "network connected");

    double capacity = 0.0;
    for (const auto& u : instance.units) capacity += u.p_max;
    double peak = 0.0;
    for (int t = 0; t < instance.horizon; ++t) {
        bool lengths_ok = true;
        for (const auto& load : instance.loads)
            if (static_cast<int>(load.demand.size()) != instance.horizon) lengths_ok = false;
        if (lengths_ok) peak = std::max(peak, instance.total_demand(t));
    }
    if (capacity + 1e-9 < peak)
        fail("instance", "warning: total capacity below peak load");

    return violations;
}

bool check_min_up_down(const std::vector<int>& z_row, const GeneratingUnit& unit) {
    const int T = static_cast<int>(z_row.size());
    if (T == 0) throw std::invalid_argument("check_min_up_down: empty commitment row");
    auto required = [&unit](int state) {
        return state == 1 ? unit.min_up : unit.min_down;
    };

    const int init_state = unit.init_on ? 1 : 0;
    // An immediate switch at t=1 ends the initial run; it must be complete.
    if (z_row[0] != init_state && unit.init_duration < required(init_state)) return false;

    int t = 0;
    while (t < T) {
        int state = z_row[static_cast<std::size_t>(t)];
        int begin = t;
        while (t < T && z_row[static_cast<std::size_t>(t)] == state) ++t;
        int length = t - begin;
        if (begin == 0 && state == init_state) length += unit.init_duration;
        if (t == T) break;  // truncated by the horizon end; may complete next horizon
        if (length < required(state)) return false;
    }
    return true;
}

}  // namespace uc
