// Command-line front end: solve a case, sweep a parameter, or run the
// brute-force oracle.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "uc/caseio.hpp"
#include "uc/driver.hpp"
#include "uc/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitIterationLimit = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitOracleBound = 4;

struct CommonOpts {
    std::string case_path;
    std::string extras_path;  // switches the reader to MATPOWER mode
    double epsilon = 1e-4;
    double delta = 0.5;
    double step_bound = 1.0;
    double c0 = 0.0;  // 0 = use the closed-form optimizer
    int max_iter = 20;
    bool no_screening = false;
    bool serial = false;
    double reference_cost = 0.0;
    unsigned seed = 0;  // reserved for randomized fixtures
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("case", opts.case_path, "case file")->required();
    cmd->add_option("--matpower-extras", opts.extras_path,
                    "generator extras JSON; reads the case as MATPOWER text");
    cmd->add_option("--epsilon", opts.epsilon, "convergence tolerance");
    cmd->add_option("--delta", opts.delta, "commitment-protection margin");
    cmd->add_option("--step-bound", opts.step_bound, "upper bound on c0");
    cmd->add_option("--c0", opts.c0, "initial step size (overrides the optimizer)");
    cmd->add_option("--max-iter", opts.max_iter, "iteration cap");
    cmd->add_flag("--no-screening", opts.no_screening, "keep every line constraint");
    cmd->add_flag("--serial", opts.serial, "disable OpenMP parallelism");
    cmd->add_option("--reference-cost", opts.reference_cost,
                    "reference optimum enabling normalized cost");
    cmd->add_option("--seed", opts.seed, "seed for randomized fixtures");
}

int validate_common(const CommonOpts& opts) {
    if (opts.max_iter <= 0) {
        std::cerr << "error: --max-iter must be positive\n";
        return kExitInput;
    }
    if (!(opts.epsilon > 0.0) || !(opts.step_bound > 0.0) || opts.delta < 0.0 || opts.c0 < 0.0) {
        std::cerr << "error: tolerances and step parameters must be positive\n";
        return kExitInput;
    }
    return kExitOk;
}

uc::SolverConfig make_config(const CommonOpts& opts) {
    uc::SolverConfig config;
    config.epsilon = opts.epsilon;
    config.delta = opts.delta;
    config.step_bound = opts.step_bound;
    config.max_iterations = opts.max_iter;
    config.enable_screening = !opts.no_screening;
    config.parallel = !opts.serial;
    return config;
}

bool load_case(const CommonOpts& opts, uc::UcInstance& instance) {
    std::ifstream in(opts.case_path);
    if (!in) {
        std::cerr << "error: cannot read " << opts.case_path << "\n";
        return false;
    }
    try {
        if (opts.extras_path.empty()) {
            instance = uc::parse_native_case(in);
        } else {
            std::ifstream extras(opts.extras_path);
            if (!extras) {
                std::cerr << "error: cannot read " << opts.extras_path << "\n";
                return false;
            }
            instance = uc::parse_matpower_subset(in, extras);
        }
    } catch (const uc::CaseParseError& e) {
        std::cerr << "error: " << opts.case_path << ": " << e.what() << "\n";
        return false;
    }
    auto problems = uc::validate_instance(instance);
    for (const auto& p : problems)
        if (p.find("warning:") != std::string::npos) std::cerr << p << "\n";
    return true;
}

int run_solve(const CommonOpts& opts, const std::string& out_path) {
    uc::UcInstance instance;
    if (!load_case(opts, instance)) return kExitInput;

    std::optional<double> c0;
    if (opts.c0 > 0.0) c0 = opts.c0;
    uc::SolveResult result = uc::solve_schedule(instance, make_config(opts), c0);

    if (result.status == uc::SolveStatus::InstanceInfeasible) {
        std::cerr << "instance infeasible: period " << result.infeasible_period + 1
                  << " admits no dispatch\n";
        return kExitInfeasible;
    }

    uc::ScheduleSummary summary;
    summary.cost = result.cost;
    summary.iterations = result.iterations;
    summary.violation = result.violation_history.empty() ? 0.0 : result.violation_history.back();
    if (opts.reference_cost > 0.0)
        summary.cost.normalized_cost =
            uc::normalized_cost(result.cost.total_cost, opts.reference_cost);

    std::vector<std::string> ids;
    for (const auto& u : instance.units) ids.push_back(u.id);
    std::string text = uc::write_schedule(result.schedule, ids, summary);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return kExitInput;
        }
        out << text;
    }

    std::cerr << "status=" << (result.status == uc::SolveStatus::Feasible ? "feasible"
                                                                          : "iteration_limit")
              << " iterations=" << result.iterations << " c0=" << uc::format_double(result.c0_used)
              << " cost=" << uc::format_double(result.cost.total_cost)
              << " wall_ms=" << uc::format_double(result.timings.total_ms) << "\n";
    if (summary.cost.normalized_cost)
        std::cerr << "normalized_cost=" << uc::format_double(*summary.cost.normalized_cost) << "\n";
    return result.status == uc::SolveStatus::Feasible ? kExitOk : kExitIterationLimit;
}

struct SweepSpec {
    std::string parameter;  // c0, s_d, s_M, s_F, s_R, load
    double from = 0.0;
    double to = 1.0;
    int count = 1;
};

std::vector<double> sweep_grid(const SweepSpec& spec, double step_bound) {
    std::vector<double> grid;
    if (spec.parameter == "c0") {
        // Log-uniform over (0, u]; `from` scales the lower decade.
        double lo = spec.from > 0.0 ? spec.from : step_bound * 1e-3;
        double hi = spec.to > 0.0 ? std::min(spec.to, step_bound) : step_bound;
        for (int j = 0; j < spec.count; ++j) {
            double f = spec.count == 1 ? 1.0 : static_cast<double>(j) / (spec.count - 1);
            grid.push_back(lo * std::pow(hi / lo, f));
        }
    } else {
        for (int j = 0; j < spec.count; ++j) {
            double f = spec.count == 1 ? 0.0 : static_cast<double>(j) / (spec.count - 1);
            grid.push_back(spec.from + f * (spec.to - spec.from));
        }
    }
    return grid;
}

int run_bench(const CommonOpts& opts, const SweepSpec& spec, const std::string& out_path,
              int workers) {
    static const std::vector<std::string> kParameters = {"c0", "s_d", "s_M", "s_F", "s_R", "load"};
    if (std::find(kParameters.begin(), kParameters.end(), spec.parameter) == kParameters.end()) {
        std::cerr << "error: unknown sweep parameter '" << spec.parameter << "'\n";
        return kExitInput;
    }
    if (spec.count <= 0 || workers <= 0) {
        std::cerr << "error: --count and --workers must be positive\n";
        return kExitInput;
    }
    if (spec.parameter != "c0" && (!(spec.from > 0.0) || !(spec.to > 0.0))) {
        std::cerr << "error: scaling factors must be positive\n";
        return kExitInput;
    }

    uc::UcInstance base;
    if (!load_case(opts, base)) return kExitInput;

    std::vector<double> grid = sweep_grid(spec, opts.step_bound);
    std::vector<uc::BenchRow> rows(grid.size());

    uc::SolverConfig config = make_config(opts);
    config.parallel = workers == 1 && !opts.serial;  // avoid nested parallelism

    std::string case_name = opts.case_path;
    if (auto slash = case_name.find_last_of('/'); slash != std::string::npos)
        case_name = case_name.substr(slash + 1);

#pragma omp parallel for schedule(dynamic) num_threads(workers) if (workers > 1)
    for (std::size_t j = 0; j < grid.size(); ++j) {
        uc::BenchRow row;
        row.case_name = case_name;
        row.c0 = opts.c0;
        if (spec.parameter == "c0") row.c0 = grid[j];
        else if (spec.parameter == "s_d" || spec.parameter == "load") row.factors.s_d = grid[j];
        else if (spec.parameter == "s_M") row.factors.s_m = grid[j];
        else if (spec.parameter == "s_F") row.factors.s_f = grid[j];
        else if (spec.parameter == "s_R") row.factors.s_r = grid[j];

        uc::UcInstance instance = uc::apply_scaling(base, row.factors);
        std::optional<double> c0;
        if (row.c0 > 0.0) c0 = row.c0;
        uc::SolveResult result = uc::solve_schedule(instance, config, c0);

        row.c0_optimized = !c0.has_value() && result.c0_used > 0.0;
        row.c0 = result.c0_used > 0.0 ? result.c0_used : row.c0;
        row.iterations = result.iterations;
        row.feasible = result.status == uc::SolveStatus::Feasible;
        row.cost = row.feasible ? result.cost.total_cost : 0.0;
        if (row.feasible && opts.reference_cost > 0.0)
            row.normalized_cost = uc::normalized_cost(row.cost, opts.reference_cost);
        row.wall_ms = result.timings.total_ms;
        rows[j] = std::move(row);
    }

    std::ostringstream csv;
    csv << uc::bench_csv_header();
    for (const auto& row : rows) csv << uc::bench_csv_row(row);
    if (out_path.empty() || out_path == "-") {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return kExitInput;
        }
        out << csv.str();
    }
    return kExitOk;
}

int run_oracle(const CommonOpts& opts, long long max_combinations) {
    uc::UcInstance instance;
    if (!load_case(opts, instance)) return kExitInput;

    std::optional<uc::OracleResult> result;
    try {
        result = uc::brute_force_uc(instance, max_combinations);
    } catch (const uc::OracleBoundExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOracleBound;
    }
    if (!result) {
        std::cerr << "instance infeasible: no commitment admits a dispatch\n";
        return kExitInfeasible;
    }

    std::cout << "cost=" << uc::format_double(result->cost) << "\n";
    uc::ScheduleSummary summary;
    summary.cost = uc::compute_cost(result->schedule, instance.units);
    std::vector<std::string> ids;
    for (const auto& u : instance.units) ids.push_back(u.id);
    std::cout << uc::write_schedule(result->schedule, ids, summary);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fast unit-commitment solver"};
    app.require_subcommand(1);

    CommonOpts solve_opts, bench_opts, oracle_opts;
    std::string solve_out, bench_out;
    SweepSpec sweep;
    int workers = 1;
    long long max_combinations = 1000000;

    CLI::App* solve = app.add_subcommand("solve", "solve one case");
    add_common_flags(solve, solve_opts);
    solve->add_option("-o,--output", solve_out, "schedule CSV path (default stdout)");

    CLI::App* bench = app.add_subcommand("bench", "sweep one parameter");
    add_common_flags(bench, bench_opts);
    bench->add_option("--sweep", sweep.parameter, "c0, s_d, s_M, s_F, s_R, or load")->required();
    bench->add_option("--from", sweep.from, "sweep range start");
    bench->add_option("--to", sweep.to, "sweep range end");
    bench->add_option("--count", sweep.count, "number of sweep points")->required();
    bench->add_option("--workers", workers, "concurrent sweep points");
    bench->add_option("-o,--output", bench_out, "benchmark CSV path (default stdout)");

    CLI::App* oracle = app.add_subcommand("oracle", "exact optimum by enumeration");
    add_common_flags(oracle, oracle_opts);
    oracle->add_option("--max-combinations", max_combinations, "search-space bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (solve->parsed()) {
            if (int rc = validate_common(solve_opts)) return rc;
            return run_solve(solve_opts, solve_out);
        }
        if (bench->parsed()) {
            if (int rc = validate_common(bench_opts)) return rc;
            return run_bench(bench_opts, sweep, bench_out, workers);
        }
        if (int rc = validate_common(oracle_opts)) return rc;
        return run_oracle(oracle_opts, max_combinations);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
