#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace uc {

using Matrix = std::vector<std::vector<double>>;
using IntMatrix = std::vector<std::vector<int>>;

inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();

struct GeneratingUnit {
    std::string id;
    std::string bus;
    double p_min = 0.0;          // MW
    double p_max = 0.0;          // MW
    double cost_a = 0.0;         // $/MWh
    double cost_b = 0.0;         // $/h while committed
    double startup_cost = 0.0;   // $ per 0->1 transition
    double ramp_up = kUnlimited;    // MW/h
    double ramp_down = kUnlimited;  // MW/h
    double startup_ramp = kUnlimited;   // MW in the first on period
    double shutdown_ramp = kUnlimited;  // MW in the last on period
    int min_up = 1;              // h
    int min_down = 1;            // h
    bool init_on = false;
    int init_duration = 1;       // h already spent in the initial state
    double init_power = 0.0;     // MW, meaningful only when init_on
};

struct TransmissionLine {
    std::string id;
    std::string from_bus;
    std::string to_bus;
    double reactance = 0.0;  // p.u.
    double limit = kUnlimited;  // MW; kUnlimited = no rating
};

struct LoadProfile {
    std::string bus;
    std::vector<double> demand;  // MW per period
};

struct UcInstance {
    std::vector<GeneratingUnit> units;
    std::vector<TransmissionLine> lines;
    std::vector<std::string> buses;
    std::string slack_bus;
    std::vector<LoadProfile> loads;
    int horizon = 0;  // periods of 1 h

    std::size_t num_units() const { return units.size(); }
    std::size_t num_lines() const { return lines.size(); }
    std::size_t num_buses() const { return buses.size(); }

    int bus_index(const std::string& bus) const;
    // Total demand of period t (0-based).
    double total_demand(int t) const;
    // Demand per distinct bus at period t, indexed like buses.
    std::vector<double> bus_demand(int t) const;
};

struct Schedule {
    IntMatrix z;  // N x T in {0,1}
    Matrix p;     // N x T, MW
};

struct Multipliers {
    std::vector<double> lambda0;  // T, sign-free
    Matrix lambda_plus;           // L x T, >= 0
    Matrix lambda_minus;          // L x T, >= 0

    static Multipliers zeros(std::size_t num_lines, std::size_t horizon);
};

struct SolverConfig {
    double epsilon = 1e-4;     // convergence tolerance on total violation
    double delta = 0.5;        // margin protecting trial commitments in the c0 search
    double step_bound = 1.0;   // upper bound u on c0
    int max_iterations = 20;
    double lp_tolerance = 1e-8;
    bool enable_screening = true;
    bool parallel = true;      // OpenMP over units/periods; serial path kept for testing
};

// Empty iff every type invariant holds; each entry names the entity and rule.
std::vector<std::string> validate_instance(const UcInstance& instance);

// True iff every maximal on-run is >= min_up and off-run >= min_down, with the
// run containing t=1 extended by init_duration when it continues the initial
// state, an immediate switch at t=1 requiring the initial run to be complete,
// and runs truncated by the horizon end exempt (they finish next horizon).
bool check_min_up_down(const std::vector<int>& z_row, const GeneratingUnit& unit);

}  // namespace uc
