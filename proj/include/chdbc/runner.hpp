// Time-stepping driver: advances the implicit scheme to t_end, sampling
// diagnostics and keeping late-time snapshots on a geometric schedule for
// the long-time verification.
#pragma once

#include <functional>
#include <vector>

#include "chdbc/diagnostics.hpp"
#include "chdbc/solver.hpp"

namespace chdbc {

struct RunOptions {
    int sample_interval = 1;     // steps between diagnostics records
    bool keep_snapshots = true;  // geometric snapshot schedule (ratio 1.5
                                 // starting at t_end/10)
    std::function<void(const DiagnosticsRecord&)> on_record;  // optional sink
};

struct RunResult {
    State final_state;
    std::vector<DiagnosticsRecord> records;
    std::vector<double> snapshot_times;
    std::vector<BulkSurfaceField> snapshots;
    double initial_energy = 0.0;
    double final_energy = 0.0;
    double max_energy = 0.0;
    double max_abs_rho = 0.0;  // over all steps, including the initial state
    // accumulated dt * c(rho^n, u^n, mu^{n+1}), the convection input to the
    // dissipation budget
    double convection_work = 0.0;
    long steps = 0;
};

// t_end is interpreted as round(t_end/dt) steps of the configured dt.
RunResult run(const InitialData& initial, TimeStepper& stepper,
              const Recorder& recorder, const RunOptions& options = {});

}  // namespace chdbc
