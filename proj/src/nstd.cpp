#include "uc/nstd.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "uc/lagrangian.hpp"

namespace uc {

namespace {

int add_node(NstdGraph& g, int period, NstdGraph::Boundary boundary) {
    g.nodes.push_back(NstdGraph::Node{period, boundary});
    g.out_edges.emplace_back();
    return static_cast<int>(g.nodes.size()) - 1;
}

void add_edge(NstdGraph& g, int from, int to, int status, int t_begin, int t_end) {
    g.edges.push_back(NstdGraph::Edge{from, to, status, t_begin, t_end});
    g.out_edges[static_cast<std::size_t>(from)].push_back(static_cast<int>(g.edges.size()) - 1);
}

}  // namespace

NstdGraph build_nstd(const GeneratingUnit& unit, int horizon) {
    if (horizon < 1) throw std::invalid_argument("build_nstd: horizon >= 1 required");
    NstdGraph g;
    g.horizon = horizon;
    g.source = add_node(g, 0, NstdGraph::Boundary::Source);
    // on_at[t] / off_at[t]: the unit switches on / off at period t (1-based).
    std::vector<int> on_at(static_cast<std::size_t>(horizon) + 1, -1);
    std::vector<int> off_at(static_cast<std::size_t>(horizon) + 1, -1);
    for (int t = 1; t <= horizon; ++t) {
        on_at[static_cast<std::size_t>(t)] = add_node(g, t, NstdGraph::Boundary::TurningOn);
        off_at[static_cast<std::size_t>(t)] = add_node(g, t, NstdGraph::Boundary::TurningOff);
    }
    g.sink = add_node(g, horizon + 1, NstdGraph::Boundary::Sink);

    const int init_state = unit.init_on ? 1 : 0;
    const int init_req = unit.init_on ? unit.min_up : unit.min_down;

    // Initial run continues the initial state; switching at t2 needs the
    // combined length to reach the minimum. t2 == 1 is the immediate switch.
    for (int t2 = 1; t2 <= horizon; ++t2) {
        if (unit.init_duration + (t2 - 1) < init_req) continue;
        int target = init_state == 1 ? off_at[static_cast<std::size_t>(t2)]
                                     : on_at[static_cast<std::size_t>(t2)];
        add_edge(g, g.source, target, init_state, 1, t2 - 1);
    }
    add_edge(g, g.source, g.sink, init_state, 1, horizon);

    for (int t1 = 1; t1 <= horizon; ++t1) {
        for (int t2 = t1 + unit.min_up; t2 <= horizon; ++t2)
            add_edge(g, on_at[static_cast<std::size_t>(t1)], off_at[static_cast<std::size_t>(t2)],
                     1, t1, t2 - 1);
        add_edge(g, on_at[static_cast<std::size_t>(t1)], g.sink, 1, t1, horizon);
        for (int t2 = t1 + unit.min_down; t2 <= horizon; ++t2)
            add_edge(g, off_at[static_cast<std::size_t>(t1)], on_at[static_cast<std::size_t>(t2)],
                     0, t1, t2 - 1);
        add_edge(g, off_at[static_cast<std::size_t>(t1)], g.sink, 0, t1, horizon);
    }
    return g;
}

int edge_cost(const NstdGraph::Edge& edge, const std::vector<int>& trial_z_row) {
    int cost = 0;
    for (int t = edge.t_begin; t <= edge.t_end; ++t)
        cost += std::abs(trial_z_row[static_cast<std::size_t>(t - 1)] - edge.status);
    return cost;
}

RepairResult repair_unit(const NstdGraph& graph, const std::vector<int>& trial_z_row) {
    if (static_cast<int>(trial_z_row.size()) != graph.horizon)
        throw std::invalid_argument("repair_unit: trial row length mismatch");

    constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
    struct Best {
        long long cost = kInf;
        long long on_count = kInf;
    };
    std::vector<Best> best(graph.nodes.size());
    best[static_cast<std::size_t>(graph.sink)] = Best{0, 0};

    // Nodes were created in ascending period order; process in reverse.
    for (int v = static_cast<int>(graph.nodes.size()) - 1; v >= 0; --v) {
        for (int e : graph.out_edges[static_cast<std::size_t>(v)]) {
            const auto& edge = graph.edges[static_cast<std::size_t>(e)];
            const Best& next = best[static_cast<std::size_t>(edge.to)];
            if (next.cost >= kInf) continue;
            long long run_len = std::max(0, edge.t_end - edge.t_begin + 1);
            Best cand{next.cost + edge_cost(edge, trial_z_row),
                      next.on_count + (edge.status == 1 ? run_len : 0)};
            Best& cur = best[static_cast<std::size_t>(v)];
            if (cand.cost < cur.cost || (cand.cost == cur.cost && cand.on_count < cur.on_count))
                cur = cand;
        }
    }

    const Best& opt = best[static_cast<std::size_t>(graph.source)];
    if (opt.cost >= kInf) throw std::logic_error("repair_unit: no feasible path");

    // Greedy reconstruction; among edges on an optimal path, an off-run edge
    // prefers the sink then later switch periods, an on-run edge prefers
    // earlier switch periods then the sink, giving the lex-smallest row.
    RepairResult result;
    result.z_row.assign(static_cast<std::size_t>(graph.horizon), 0);
    result.distance = static_cast<int>(opt.cost);
    int node = graph.source;
    Best need = opt;
    while (node != graph.sink) {
        int chosen = -1;
        for (int e : graph.out_edges[static_cast<std::size_t>(node)]) {
            const auto& edge = graph.edges[static_cast<std::size_t>(e)];
            const Best& next = best[static_cast<std::size_t>(edge.to)];
            if (next.cost >= kInf) continue;
            long long run_len = std::max(0, edge.t_end - edge.t_begin + 1);
            if (next.cost + edge_cost(edge, trial_z_row) != need.cost) continue;
            if (next.on_count + (edge.status == 1 ? run_len : 0) != need.on_count) continue;
            if (chosen < 0) { chosen = e; continue; }
            const auto& cur = graph.edges[static_cast<std::size_t>(chosen)];
            bool prefer;
            if (edge.status == 1) {
                // Earlier off switch first, sink last.
                prefer = edge.to != graph.sink &&
                         (cur.to == graph.sink ||
                          graph.nodes[static_cast<std::size_t>(edge.to)].period <
                              graph.nodes[static_cast<std::size_t>(cur.to)].period);
            } else {
                prefer = cur.to != graph.sink &&
                         (edge.to == graph.sink ||
                          graph.nodes[static_cast<std::size_t>(edge.to)].period >
                              graph.nodes[static_cast<std::size_t>(cur.to)].period);
            }
            if (prefer) chosen = e;
        }
        const auto& edge = graph.edges[static_cast<std::size_t>(chosen)];
        for (int t = edge.t_begin; t <= edge.t_end; ++t)
            result.z_row[static_cast<std::size_t>(t - 1)] = edge.status;
        long long run_len = std::max(0, edge.t_end - edge.t_begin + 1);
        need.cost -= edge_cost(edge, trial_z_row);
        need.on_count -= edge.status == 1 ? run_len : 0;
        node = edge.to;
    }
    return result;
}

AdjustResult adjust_schedule(const UcInstance& instance, const IntMatrix& trial_z, bool parallel) {
    const int n = static_cast<int>(instance.num_units());
    AdjustResult result;
    result.z.resize(static_cast<std::size_t>(n));
    std::vector<int> distances(static_cast<std::size_t>(n), 0);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int i = 0; i < n; ++i) {
        NstdGraph graph = build_nstd(instance.units[static_cast<std::size_t>(i)], instance.horizon);
        RepairResult rep = repair_unit(graph, trial_z[static_cast<std::size_t>(i)]);
        result.z[static_cast<std::size_t>(i)] = std::move(rep.z_row);
        distances[static_cast<std::size_t>(i)] = rep.distance;
    }

    for (int i = 0; i < n; ++i) {
        result.total_distance += distances[static_cast<std::size_t>(i)];
        result.startup_cost += startup_cost_of_row(result.z[static_cast<std::size_t>(i)],
                                                   instance.units[static_cast<std::size_t>(i)]);
    }
    return result;
}

long long count_paths(const NstdGraph& graph) {
    std::vector<long long> paths(graph.nodes.size(), 0);
    paths[static_cast<std::size_t>(graph.sink)] = 1;
    for (int v = static_cast<int>(graph.nodes.size()) - 1; v >= 0; --v)
        for (int e : graph.out_edges[static_cast<std::size_t>(v)])
            paths[static_cast<std::size_t>(v)] += paths[static_cast<std::size_t>(graph.edges[static_cast<std::size_t>(e)].to)];
    return paths[static_cast<std::size_t>(graph.source)];
}

}  // namespace uc
