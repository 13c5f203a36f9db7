#pragma once

#include <stdexcept>
#include <vector>

#include "uc/model.hpp"

namespace uc::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LpRow {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEqual;
    double rhs = 0.0;
};

// Minimization problem over bounded variables; -inf/+inf bounds allowed,
// free variables are handled natively (no splitting).
struct LpProblem {
    std::vector<double> objective;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<LpRow> rows;

    std::size_t num_vars() const { return objective.size(); }

    // Adds a variable, returns its index.
    std::size_t add_variable(double cost, double lo, double hi);
    void add_row(std::vector<double> coeffs, Relation rel, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective_value = 0.0;
    // Shadow prices dObj/d(rhs): <= rows yield duals <= 0, >= rows >= 0,
    // equality rows sign-free (minimization convention).
    std::vector<double> row_duals;
    std::vector<double> reduced_costs;
};

struct LpIterationLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bounded revised simplex, two phases, Dantzig pricing with Bland fallback
// after a stall; deterministic for identical input.
LpSolution solve_lp(const LpProblem& problem, double tolerance = 1e-8);

// Dense LU with partial pivoting. Throws SingularMatrixError.
std::vector<double> solve_linear_system(Matrix a, std::vector<double> b);

// Max over primal/dual feasibility, complementary slackness, and duality-gap
// residuals of an Optimal solution (relative scaling).
double kkt_residual(const LpProblem& problem, const LpSolution& solution);

// When enabled, every Optimal solve_lp result is KKT-checked and the worst
// residual is recorded; used by the test suites.
void set_kkt_validation(bool enabled);
double max_recorded_kkt_residual();
void reset_recorded_kkt_residual();

}  // namespace uc::lp
