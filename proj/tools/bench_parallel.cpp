// Times the OpenMP kernels against their serial paths on one case.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <omp.h>

#include "uc/caseio.hpp"
#include "uc/driver.hpp"
#include "uc/feasibility.hpp"
#include "uc/lagrangian.hpp"
#include "uc/network.hpp"
#include "uc/nstd.hpp"

namespace {

template <typename F>
double time_ms(F&& fn, int repeats) {
    auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < repeats; ++r) fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
               .count() /
           repeats;
}

}  // namespace

int main(int argc, char** argv) {
    const char* path = argc > 1 ? argv[1] : "cases/rts24.case";
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot read " << path << "\n";
        return 1;
    }
    uc::UcInstance instance = uc::parse_native_case(in);
    uc::NetworkModel model = uc::compute_ptdf(instance);
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 20;

    std::printf("case=%s units=%zu lines=%zu T=%d threads=%d repeats=%d\n", path,
                instance.num_units(), instance.num_lines(), instance.horizon,
                omp_get_max_threads(), repeats);

    uc::Multipliers lambda = uc::init_multipliers(instance, model, 1e-8, false);
    uc::BetaTable beta = uc::compute_beta(instance, model, lambda);
    uc::IntMatrix z_trial = uc::trial_uc(beta);

    struct Row {
        const char* name;
        double serial_ms;
        double parallel_ms;
    };
    Row rows[] = {
        {"init_multipliers",
         time_ms([&] { uc::init_multipliers(instance, model, 1e-8, false); }, repeats),
         time_ms([&] { uc::init_multipliers(instance, model, 1e-8, true); }, repeats)},
        {"adjust_schedule", time_ms([&] { uc::adjust_schedule(instance, z_trial, false); }, repeats),
         time_ms([&] { uc::adjust_schedule(instance, z_trial, true); }, repeats)},
        {"screen_constraints",
         time_ms([&] { uc::screen_constraints(instance, model, z_trial, false); }, repeats),
         time_ms([&] { uc::screen_constraints(instance, model, z_trial, true); }, repeats)},
    };

    uc::SolverConfig config;
    config.parallel = false;
    double solve_serial = time_ms([&] { uc::solve_schedule(instance, config); }, repeats);
    config.parallel = true;
    double solve_parallel = time_ms([&] { uc::solve_schedule(instance, config); }, repeats);

    std::printf("%-20s %12s %12s %8s\n", "kernel", "serial_ms", "parallel_ms", "speedup");
    for (const Row& r : rows)
        std::printf("%-20s %12.3f %12.3f %8.2f\n", r.name, r.serial_ms, r.parallel_ms,
                    r.serial_ms / r.parallel_ms);
    std::printf("%-20s %12.3f %12.3f %8.2f\n", "solve_schedule", solve_serial, solve_parallel,
                solve_serial / solve_parallel);

    // The kernels must agree bit-for-bit.
    uc::SolverConfig serial_cfg = config;
    serial_cfg.parallel = false;
    uc::SolveResult a = uc::solve_schedule(instance, serial_cfg);
    uc::SolveResult b = uc::solve_schedule(instance, config);
    bool same = a.schedule.z == b.schedule.z && a.schedule.p == b.schedule.p &&
                a.iterations == b.iterations;
    std::printf("serial/parallel results identical: %s\n", same ? "yes" : "NO");
    return same ? 0 : 1;
}
