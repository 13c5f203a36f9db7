#pragma once

#include <optional>
#include <stdexcept>

#include "uc/model.hpp"
#include "uc/network.hpp"

namespace uc {

// Canonical 2-bus micro case: one 30 MW line, a cheap unit behind it, an
// expensive unit at the load bus, 40 MW load for two periods.
UcInstance make_mc1();

struct OracleBoundExceeded : std::runtime_error {
    long long combinations;
    explicit OracleBoundExceeded(long long n)
        : std::runtime_error("oracle search space too large: " + std::to_string(n) +
                             " commitment combinations"),
          combinations(n) {}
};

// All min-up/down-feasible rows of length T, generated by recursive run
// construction (independent of check_min_up_down).
std::vector<std::vector<int>> enumerate_feasible_strings(const GeneratingUnit& unit, int horizon);

struct OracleResult {
    double cost = 0.0;
    Schedule schedule;
};

// Exact optimum by enumerating per-unit feasible rows and solving the
// zero-slack dispatch LP for each combination. Empty when no combination
// admits a dispatch. Throws OracleBoundExceeded past `max_combinations`.
std::optional<OracleResult> brute_force_uc(const UcInstance& instance,
                                           long long max_combinations = 1000000);

}  // namespace uc
