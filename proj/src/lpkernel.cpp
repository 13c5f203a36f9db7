#include "uc/lpkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

namespace uc::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-10;
constexpr int kRefactorEvery = 200;
constexpr int kStallLimit = 60;

bool g_validate = false;
double g_max_kkt = 0.0;
std::mutex g_kkt_mutex;

struct SparseCol {
    std::vector<int> idx;
    std::vector<double> val;
};

enum class VStatus { Basic, AtLower, AtUpper, FreeAtZero };

// Bounded-variable revised simplex over rows already in equality form
// (logical column per row appended by the caller).
class Simplex {
public:
    Simplex(std::vector<SparseCol> cols, std::vector<double> lower, std::vector<double> upper,
            std::vector<double> rhs, double tol)
        : cols_(std::move(cols)),
          lower_(std::move(lower)),
          upper_(std::move(upper)),
          rhs_(std::move(rhs)),
          m_(static_cast<int>(rhs_.size())),
          tol_(tol) {}

    int num_vars() const { return static_cast<int>(cols_.size()); }

    // Installs the starting point: `basis` holds one variable per row, all
    // other variables sit at the bound chosen by `status`.
    void install(std::vector<int> basis, std::vector<VStatus> status, std::vector<double> x) {
        basis_ = std::move(basis);
        status_ = std::move(status);
        x_ = std::move(x);
        refactorize();
    }

    // Minimizes cost over the current feasible point. Returns false when
    // unbounded. Throws LpIterationLimitError.
    bool minimize(const std::vector<double>& cost) {
        cost_ = &cost;
        const long max_iter = 200L * (m_ + num_vars()) + 2000;
        int since_refactor = 0;
        int stall = 0;
        for (long iter = 0; iter < max_iter; ++iter) {
            std::vector<double> y = duals();
            bool bland = stall >= kStallLimit;
            int q = -1;
            int dir = 0;
            double best = tol_;
            for (int j = 0; j < num_vars(); ++j) {
                if (status_[j] == VStatus::Basic) continue;
                if (lower_[j] == upper_[j]) continue;  // fixed
                double d = reduced_cost(j, y, cost);
                double score = 0.0;
                int cand_dir = 0;
                if (status_[j] == VStatus::AtLower && d < -tol_) {
                    score = -d;
                    cand_dir = +1;
                } else if (status_[j] == VStatus::AtUpper && d > tol_) {
                    score = d;
                    cand_dir = -1;
                } else if (status_[j] == VStatus::FreeAtZero && std::abs(d) > tol_) {
                    score = std::abs(d);
                    cand_dir = d < 0 ? +1 : -1;
                }
                if (cand_dir == 0) continue;
                if (bland) { q = j; dir = cand_dir; break; }
                if (score > best) { best = score; q = j; dir = cand_dir; }
            }
            if (q < 0) return true;  // optimal

            std::vector<double> alpha = ftran(cols_[q]);

            // Ratio test: entering variable moves by theta*dir.
            double theta = kInf;
            int leave_pos = -1;
            double range = upper_[q] - lower_[q];
            if (std::isfinite(range)) theta = range;
            for (int i = 0; i < m_; ++i) {
                double a = dir * alpha[i];
                int b = basis_[i];
                double step;
                if (a > kPivotTol) {
                    if (lower_[b] == -kInf) continue;
                    step = (x_[b] - lower_[b]) / a;
                } else if (a < -kPivotTol) {
                    if (upper_[b] == kInf) continue;
                    step = (upper_[b] - x_[b]) / (-a);
                } else {
                    continue;
                }
                if (step < -1e-12) step = 0.0;
                if (step < theta - 1e-12 ||
                    (step < theta + 1e-12 && leave_pos >= 0 && basis_[i] < basis_[leave_pos])) {
                    theta = step;
                    leave_pos = i;
                }
            }
            if (theta == kInf) return false;  // unbounded

            stall = theta <= 1e-10 ? stall + 1 : 0;

            if (leave_pos < 0) {
                // Bound flip, no basis change.
                for (int i = 0; i < m_; ++i) x_[basis_[i]] -= theta * dir * alpha[i];
                x_[q] = status_[q] == VStatus::AtLower ? upper_[q] : lower_[q];
                status_[q] = status_[q] == VStatus::AtLower ? VStatus::AtUpper : VStatus::AtLower;
                continue;
            }

            for (int i = 0; i < m_; ++i) x_[basis_[i]] -= theta * dir * alpha[i];
            int p = basis_[leave_pos];
            // Snap the leaving variable to the bound it hit.
            double a = dir * alpha[leave_pos];
            if (a > 0) {
                x_[p] = lower_[p];
                status_[p] = VStatus::AtLower;
            } else {
                x_[p] = upper_[p];
                status_[p] = VStatus::AtUpper;
            }
            double start = status_[q] == VStatus::AtUpper ? upper_[q]
                          : status_[q] == VStatus::AtLower ? lower_[q] : 0.0;
            x_[q] = start + dir * theta;
            status_[q] = VStatus::Basic;
            basis_[leave_pos] = q;

            if (++since_refactor >= kRefactorEvery) {
                refactorize();
                recompute_basics();
                since_refactor = 0;
            } else {
                update_inverse(alpha, leave_pos);
            }
        }
        throw LpIterationLimitError("simplex iteration limit exceeded");
    }

    std::vector<double> duals() const {
        std::vector<double> y(m_, 0.0);
        for (int k = 0; k < m_; ++k) {
            double cb = (*cost_)[basis_[k]];
            if (cb == 0.0) continue;
            const double* row = binv_[k].data();
            for (int i = 0; i < m_; ++i) y[i] += cb * row[i];
        }
        return y;
    }

    double reduced_cost(int j, const std::vector<double>& y, const std::vector<double>& cost) const {
        double d = cost[j];
        const SparseCol& col = cols_[j];
        for (std::size_t k = 0; k < col.idx.size(); ++k) d -= y[col.idx[k]] * col.val[k];
        return d;
    }

    void set_bounds(int j, double lo, double hi) {
        lower_[j] = lo;
        upper_[j] = hi;
    }

    double value(int j) const { return x_[j]; }
    VStatus status(int j) const { return status_[j]; }
    const std::vector<double>& cost() const { return *cost_; }

    // Re-snap the values of basic variables from the nonbasic point.
    void recompute_basics() {
        std::vector<double> r = rhs_;
        for (int j = 0; j < num_vars(); ++j) {
            if (status_[j] == VStatus::Basic || x_[j] == 0.0) continue;
            const SparseCol& col = cols_[j];
            for (std::size_t k = 0; k < col.idx.size(); ++k) r[col.idx[k]] -= col.val[k] * x_[j];
        }
        std::vector<double> xb = ftran_dense(r);
        for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
    }

private:
    std::vector<double> ftran(const SparseCol& col) const {
        std::vector<double> out(m_, 0.0);
        for (std::size_t k = 0; k < col.idx.size(); ++k) {
            double v = col.val[k];
            int r = col.idx[k];
            for (int i = 0; i < m_; ++i) out[i] += binv_[i][r] * v;
        }
        return out;
    }

    std::vector<double> ftran_dense(const std::vector<double>& v) const {
        std::vector<double> out(m_, 0.0);
        for (int r = 0; r < m_; ++r) {
            if (v[r] == 0.0) continue;
            for (int i = 0; i < m_; ++i) out[i] += binv_[i][r] * v[r];
        }
        return out;
    }

    void update_inverse(const std::vector<double>& alpha, int r) {
        double piv = alpha[r];
        double* rowr = binv_[r].data();
        for (int c = 0; c < m_; ++c) rowr[c] /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == r || alpha[i] == 0.0) continue;
            double f = alpha[i];
            double* rowi = binv_[i].data();
            for (int c = 0; c < m_; ++c) rowi[c] -= f * rowr[c];
        }
    }

    void refactorize() {
        // Gauss-Jordan of the basis matrix into its inverse.
        Matrix b(static_cast<std::size_t>(m_), std::vector<double>(static_cast<std::size_t>(m_), 0.0));
        for (int k = 0; k < m_; ++k) {
            const SparseCol& col = cols_[basis_[k]];
            for (std::size_t e = 0; e < col.idx.size(); ++e) b[col.idx[e]][k] = col.val[e];
        }
        binv_.assign(static_cast<std::size_t>(m_), std::vector<double>(static_cast<std::size_t>(m_), 0.0));
        for (int i = 0; i < m_; ++i) binv_[i][i] = 1.0;
        for (int c = 0; c < m_; ++c) {
            int piv = c;
            for (int i = c + 1; i < m_; ++i)
                if (std::abs(b[i][c]) > std::abs(b[piv][c])) piv = i;
            if (std::abs(b[piv][c]) < kPivotTol)
                throw SingularMatrixError("singular basis during refactorization");
            std::swap(b[piv], b[c]);
            std::swap(binv_[piv], binv_[c]);
            double d = b[c][c];
            for (int j = 0; j < m_; ++j) { b[c][j] /= d; binv_[c][j] /= d; }
            for (int i = 0; i < m_; ++i) {
                if (i == c || b[i][c] == 0.0) continue;
                double f = b[i][c];
                for (int j = 0; j < m_; ++j) { b[i][j] -= f * b[c][j]; binv_[i][j] -= f * binv_[c][j]; }
            }
        }
    }

    std::vector<SparseCol> cols_;
    std::vector<double> lower_, upper_;
    std::vector<double> rhs_;
    int m_;
    double tol_;
    std::vector<int> basis_;
    std::vector<VStatus> status_;
    std::vector<double> x_;
    Matrix binv_;
    const std::vector<double>* cost_ = nullptr;
};

}  // namespace

std::size_t LpProblem::add_variable(double cost, double lo, double hi) {
    objective.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    return objective.size() - 1;
}

void LpProblem::add_row(std::vector<double> coeffs, Relation rel, double rhs) {
    rows.push_back(LpRow{std::move(coeffs), rel, rhs});
}

LpSolution solve_lp(const LpProblem& problem, double tolerance) {
    const int n = static_cast<int>(problem.num_vars());
    const int m = static_cast<int>(problem.rows.size());

    LpSolution sol;
    for (int j = 0; j < n; ++j)
        if (problem.lower[j] > problem.upper[j]) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }

    // Row/column equilibration (inf-norm) for scale invariance.
    std::vector<double> rscale(static_cast<std::size_t>(m), 1.0);
    for (int i = 0; i < m; ++i) {
        double mx = 0.0;
        for (double v : problem.rows[i].coeffs) mx = std::max(mx, std::abs(v));
        if (mx > 0.0) rscale[i] = 1.0 / mx;
    }
    std::vector<double> cscale(static_cast<std::size_t>(n), 1.0);
    for (int j = 0; j < n; ++j) {
        double mx = 0.0;
        for (int i = 0; i < m; ++i)
            if (j < static_cast<int>(problem.rows[i].coeffs.size()))
                mx = std::max(mx, std::abs(rscale[i] * problem.rows[i].coeffs[j]));
        if (mx > 0.0) cscale[j] = 1.0 / mx;
    }

    // Structural columns (scaled, sparse), then one logical per row.
    std::vector<SparseCol> cols(static_cast<std::size_t>(n + m));
    for (int i = 0; i < m; ++i) {
        const auto& row = problem.rows[i].coeffs;
        for (int j = 0; j < static_cast<int>(row.size()); ++j) {
            double v = rscale[i] * row[j] * cscale[j];
            if (v != 0.0) {
                cols[j].idx.push_back(i);
                cols[j].val.push_back(v);
            }
        }
    }
    std::vector<double> lower(static_cast<std::size_t>(n + m));
    std::vector<double> upper(static_cast<std::size_t>(n + m));
    for (int j = 0; j < n; ++j) {
        lower[j] = problem.lower[j] / cscale[j];
        upper[j] = problem.upper[j] / cscale[j];
    }
    std::vector<double> rhs(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        rhs[i] = rscale[i] * problem.rows[i].rhs;
        int lj = n + i;
        cols[lj].idx.push_back(i);
        cols[lj].val.push_back(1.0);
        switch (problem.rows[i].rel) {
            case Relation::LessEqual:    lower[lj] = 0.0;  upper[lj] = kInf; break;
            case Relation::GreaterEqual: lower[lj] = -kInf; upper[lj] = 0.0; break;
            case Relation::Equal:        lower[lj] = 0.0;  upper[lj] = 0.0; break;
        }
    }

    // Starting point: structural vars at a finite bound (or 0 when free),
    // logicals clamped; artificials absorb whatever residual remains.
    std::vector<VStatus> status(cols.size());
    std::vector<double> x(cols.size(), 0.0);
    for (int j = 0; j < n; ++j) {
        if (std::isfinite(lower[j])) { status[j] = VStatus::AtLower; x[j] = lower[j]; }
        else if (std::isfinite(upper[j])) { status[j] = VStatus::AtUpper; x[j] = upper[j]; }
        else { status[j] = VStatus::FreeAtZero; x[j] = 0.0; }
    }
    std::vector<double> resid = rhs;
    for (int j = 0; j < n; ++j) {
        if (x[j] == 0.0) continue;
        for (std::size_t k = 0; k < cols[j].idx.size(); ++k)
            resid[cols[j].idx[k]] -= cols[j].val[k] * x[j];
    }

    std::vector<int> basis(static_cast<std::size_t>(m));
    std::vector<double> phase1_cost(cols.size(), 0.0);
    std::vector<int> artificials;
    for (int i = 0; i < m; ++i) {
        int lj = n + i;
        double w = std::clamp(resid[i], lower[lj], upper[lj]);
        double rho = resid[i] - w;
        if (std::abs(rho) > 1e-12) {
            status[lj] = std::isfinite(lower[lj]) ? VStatus::AtLower : VStatus::AtUpper;
            x[lj] = w;
            int aj = static_cast<int>(cols.size());
            cols.push_back(SparseCol{{i}, {1.0}});
            lower.push_back(std::min(0.0, rho));
            upper.push_back(std::max(0.0, rho));
            status.push_back(VStatus::Basic);
            x.push_back(rho);
            phase1_cost.push_back(rho > 0 ? 1.0 : -1.0);
            basis[i] = aj;
            artificials.push_back(aj);
        } else {
            status[lj] = VStatus::Basic;
            x[lj] = resid[i];
            basis[i] = lj;
        }
    }

    Simplex simplex(std::move(cols), std::move(lower), std::move(upper), rhs, tolerance);
    simplex.install(std::move(basis), std::move(status), std::move(x));

    double bscale = 1.0;
    for (double b : rhs) bscale = std::max(bscale, std::abs(b));

    if (!artificials.empty()) {
        simplex.minimize(phase1_cost);  // bounded below by 0, never unbounded
        double infeas = 0.0;
        for (int aj : artificials) infeas += std::abs(simplex.value(aj));
        if (infeas > tolerance * bscale * 10.0) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        for (int aj : artificials) simplex.set_bounds(aj, 0.0, 0.0);
    }

    std::vector<double> phase2_cost(simplex.num_vars(), 0.0);
    for (int j = 0; j < n; ++j) phase2_cost[j] = problem.objective[j] * cscale[j];
    bool bounded = simplex.minimize(phase2_cost);
    if (!bounded) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }
    simplex.recompute_basics();

    sol.status = LpStatus::Optimal;
    sol.x.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) sol.x[j] = simplex.value(j) * cscale[j];
    sol.objective_value = 0.0;
    for (int j = 0; j < n; ++j) sol.objective_value += problem.objective[j] * sol.x[j];

    std::vector<double> y = simplex.duals();
    sol.row_duals.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) sol.row_duals[i] = y[i] * rscale[i];
    sol.reduced_costs.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double d = problem.objective[j];
        for (int i = 0; i < m; ++i)
            if (j < static_cast<int>(problem.rows[i].coeffs.size()))
                d -= sol.row_duals[i] * problem.rows[i].coeffs[j];
        sol.reduced_costs[j] = d;
    }

    if (g_validate) {
        double r = kkt_residual(problem, sol);
        std::lock_guard<std::mutex> lock(g_kkt_mutex);
        g_max_kkt = std::max(g_max_kkt, r);
    }
    return sol;
}

std::vector<double> solve_linear_system(Matrix a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int i = c + 1; i < n; ++i)
            if (std::abs(a[i][c]) > std::abs(a[piv][c])) piv = i;
        double scale = 0.0;
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a[piv][j]));
        if (std::abs(a[piv][c]) < 1e-12 * std::max(1.0, scale))
            throw SingularMatrixError("singular matrix");
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (int i = c + 1; i < n; ++i) {
            double f = a[i][c] / a[c][c];
            if (f == 0.0) continue;
            for (int j = c; j < n; ++j) a[i][j] -= f * a[c][j];
            b[i] -= f * b[c];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

double kkt_residual(const LpProblem& problem, const LpSolution& sol) {
    const int n = static_cast<int>(problem.num_vars());
    const int m = static_cast<int>(problem.rows.size());
    double worst = 0.0;
    double xscale = 1.0;
    for (double v : sol.x) xscale = std::max(xscale, std::abs(v));
    double cscale = 1.0;
    for (double v : problem.objective) cscale = std::max(cscale, std::abs(v));

    // Primal feasibility.
    for (int j = 0; j < n; ++j) {
        worst = std::max(worst, (problem.lower[j] - sol.x[j]) / xscale);
        worst = std::max(worst, (sol.x[j] - problem.upper[j]) / xscale);
    }
    double dual_obj = 0.0;
    for (int i = 0; i < m; ++i) {
        const auto& row = problem.rows[i];
        double ax = 0.0;
        double rowscale = 1.0;
        for (int j = 0; j < static_cast<int>(row.coeffs.size()); ++j) {
            ax += row.coeffs[j] * sol.x[j];
            rowscale = std::max(rowscale, std::abs(row.coeffs[j]) * xscale);
        }
        double slack = row.rhs - ax;
        switch (row.rel) {
            case Relation::LessEqual:
                worst = std::max(worst, -slack / rowscale);
                worst = std::max(worst, sol.row_duals[i] / cscale);  // dual sign
                break;
            case Relation::GreaterEqual:
                worst = std::max(worst, slack / rowscale);
                worst = std::max(worst, -sol.row_duals[i] / cscale);
                break;
            case Relation::Equal:
                worst = std::max(worst, std::abs(slack) / rowscale);
                break;
        }
        // Complementary slackness.
        worst = std::max(worst, std::abs(sol.row_duals[i] * slack) / (cscale * rowscale));
        dual_obj += sol.row_duals[i] * row.rhs;
    }
    // Dual feasibility on bounds and the bound contribution to the dual
    // objective (nonbasic variables priced at their reduced cost).
    for (int j = 0; j < n; ++j) {
        double d = sol.reduced_costs[j];
        double at_lower = std::isfinite(problem.lower[j])
                              ? std::abs(sol.x[j] - problem.lower[j]) / xscale
                              : 1.0;
        double at_upper = std::isfinite(problem.upper[j])
                              ? std::abs(sol.x[j] - problem.upper[j]) / xscale
                              : 1.0;
        double tol_here = 1e-7;
        if (at_lower > tol_here && at_upper > tol_here)
            worst = std::max(worst, std::abs(d) / cscale);  // interior => zero reduced cost
        else if (at_lower <= tol_here && at_upper > tol_here)
            worst = std::max(worst, -d / cscale);
        else if (at_upper <= tol_here && at_lower > tol_here)
            worst = std::max(worst, d / cscale);
        dual_obj += d * sol.x[j];
    }
    // Strong duality.
    worst = std::max(worst, std::abs(sol.objective_value - dual_obj) /
                                std::max(1.0, std::abs(sol.objective_value)));
    return worst;
}

void set_kkt_validation(bool enabled) { g_validate = enabled; }

double max_recorded_kkt_residual() {
    std::lock_guard<std::mutex> lock(g_kkt_mutex);
    return g_max_kkt;
}

void reset_recorded_kkt_residual() {
    std::lock_guard<std::mutex> lock(g_kkt_mutex);
    g_max_kkt = 0.0;
}

}  // namespace uc::lp
