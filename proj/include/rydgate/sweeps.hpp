#pragma once

// Parameter sweeps behind the figure-style experiments. Points are
// independent tasks; workers may compute them concurrently but results are
// always emitted in axis order, so a sweep's CSV is reproducible
// byte-for-byte regardless of the worker count.

#include <iosfwd>
#include <string>
#include <vector>

#include "rydgate/gate.hpp"

namespace rydgate {

enum class Experiment { Susceptibility, BlockingVsRatio, TransferVsV, GhzVsVjk };

Experiment experiment_from_string(const std::string& name);
const char* to_string(Experiment experiment);

struct SweepAxis {
    double start = 0.0;
    double stop = 0.0;
    int points = 2;
    bool log_spaced = false;

    void validate() const;
    std::vector<double> values() const;
};

struct SweepSpec {
    Experiment experiment = Experiment::BlockingVsRatio;
    SweepAxis axis;
    std::vector<double> x_max_values;  // GHZ curves
    int n_atoms = 0;
    // Laser/decay parameters each point starts from; interaction strengths
    // and omega_c are set per point by the experiment definition.
    PhysParams base;
    int worker_count = 0;  // 0: RYDGATE_WORKERS, then hardware
    IntegratorConfig integrator;

    static SweepSpec defaults(Experiment experiment);
};

struct SweepRow {
    std::vector<double> axis;
    std::vector<double> results;
    double norm_loss = 0.0;
    double wall_time_s = 0.0;
    bool failed = false;
    std::string error;
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::string csv_header(Experiment experiment);
void write_csv(std::ostream& out, Experiment experiment, std::span<const SweepRow> rows);

// Explicit request, then RYDGATE_WORKERS, then hardware concurrency.
int resolve_worker_count(int requested);

}  // namespace rydgate
