#pragma once

#include "uc/model.hpp"

namespace uc {

// Per-unit state transition DAG. Interior nodes mark the period at which the
// unit switches on or off; each edge carries one on/off run. Source is the
// start of period 1 (carrying the initial state), sink is period T+1 in the
// next scheduling horizon, so the final run may be truncated.
struct NstdGraph {
    enum class Boundary { TurningOn, TurningOff, Source, Sink };

    struct Node {
        int period;         // 0 for source, T+1 for sink, else switch period (1-based)
        Boundary boundary;
    };

    struct Edge {
        int from = -1;
        int to = -1;
        int status = 0;     // run status, 0/1
        int t_begin = 1;    // run covers [t_begin, t_end], 1-based; empty if t_begin > t_end
        int t_end = 0;
    };

    int horizon = 0;
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> out_edges;  // per node, indices into edges
    int source = -1;
    int sink = -1;
};

NstdGraph build_nstd(const GeneratingUnit& unit, int horizon);

// Hamming distance between the trial row and the edge's run.
int edge_cost(const NstdGraph::Edge& edge, const std::vector<int>& trial_z_row);

struct RepairResult {
    std::vector<int> z_row;
    int distance = 0;
};

// Minimum-Hamming-distance feasible row via DP over the graph. Ties resolved
// toward fewer on-periods, then the lexicographically smallest row.
RepairResult repair_unit(const NstdGraph& graph, const std::vector<int>& trial_z_row);

struct AdjustResult {
    IntMatrix z;
    int total_distance = 0;
    double startup_cost = 0.0;
};

// Per-unit repair of the whole trial commitment matrix, plus the start-up
// cost of the repaired commitment.
AdjustResult adjust_schedule(const UcInstance& instance, const IntMatrix& trial_z,
                             bool parallel = true);

// Number of source-to-sink paths (== number of feasible rows).
long long count_paths(const NstdGraph& graph);

}  // namespace uc
