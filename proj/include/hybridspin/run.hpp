#pragma once

#include <string>
#include <vector>

#include "hybridspin/config.hpp"
#include "hybridspin/integrator.hpp"

namespace hybridspin {

struct RunResult {
    Trajectory trajectory;
    std::string csv_path;
};

// executes the configured run and writes <prefix>_diagnostics.csv (and
// snapshots when configured); snapshot_override > 0 forces a snapshot stride,
// 0 keeps the config, -1 disables snapshots
RunResult execute_run(const RunConfig& cfg, const std::string& output_dir, bool quiet,
                      int snapshot_override = 0);

// joint trajectory comparison of two configs that share grid, Hamiltonian and
// initial condition; writes <prefix>_compare.csv with difference columns
struct CompareResult {
    std::vector<double> times;
    std::vector<double> sx_l2_distance;
    std::vector<double> purity_difference;
    std::vector<double> energy_difference;
    std::string csv_path;
};

CompareResult execute_compare(const RunConfig& a, const RunConfig& b,
                              const std::string& output_dir, bool quiet);

// convergence sweep along dt or grid; factors scale the config resolution
struct SweepRow {
    double factor = 1.0;
    double dt = 0.0;
    int n_theta = 0;
    double final_error = 0.0;      // vs exact solution or finest run, when available
    double energy_drift = 0.0;
    double mass_drift = 0.0;
    double order_state = 0.0;      // observed order vs previous row
    double order_energy = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::string csv_path;
};

enum class SweepAxis { dt, grid };

SweepResult execute_sweep(const RunConfig& cfg, SweepAxis axis, const std::vector<double>& factors,
                          const std::string& output_dir, bool quiet);

// worker count for sweeps: HYBRID_SPIN_THREADS caps it
int worker_count();

}  // namespace hybridspin
