#include "chdbc/runner.hpp"

#include <algorithm>
#include <cmath>

namespace chdbc {

RunResult run(const InitialData& initial, TimeStepper& stepper,
              const Recorder& recorder, const RunOptions& options) {
    const StripMesh& mesh = stepper.mesh();
    const SolverConfig& cfg = stepper.config();
    const long n_steps = std::lround(cfg.t_end / cfg.dt);

    // geometric snapshot schedule, ratio 1.5 starting at t_end/10
    std::vector<double> targets;
    if (options.keep_snapshots && cfg.t_end > 0.0) {
        for (double t = cfg.t_end / 10.0; t < cfg.t_end; t *= 1.5) targets.push_back(t);
        targets.push_back(cfg.t_end);
    }
    size_t next_target = 0;

    RunResult out;
    State state = stepper.initialize(initial);
    out.initial_energy = free_energy(mesh, stepper.potentials(), state.rho);
    out.max_energy = out.initial_energy;
    out.max_abs_rho = state.rho.values.cwiseAbs().maxCoeff();

    auto emit = [&](const DiagnosticsRecord& rec) {
        out.records.push_back(rec);
        if (options.on_record) options.on_record(rec);
    };
    emit(recorder.record(state, state));

    const int interval = std::max(1, options.sample_interval);
    for (long step = 1; step <= n_steps; ++step) {
        const State prev = state;
        state = stepper.step(prev);
        out.steps++;
        out.convection_work += (state.t - prev.t) * convection_form(mesh, stepper.velocity(),
                                                                    prev.rho, prev.t, state.mu);
        out.max_energy =
            std::max(out.max_energy, free_energy(mesh, stepper.potentials(), state.rho));
        out.max_abs_rho = std::max(out.max_abs_rho, state.rho.values.cwiseAbs().maxCoeff());
        if (step % interval == 0 || step == n_steps) emit(recorder.record(state, prev));
        while (next_target < targets.size() && state.t >= targets[next_target] - 1e-12) {
            out.snapshot_times.push_back(state.t);
            out.snapshots.push_back(state.rho);
            ++next_target;
        }
    }
    if (n_steps == 0 && options.keep_snapshots) {
        out.snapshot_times.push_back(state.t);
        out.snapshots.push_back(state.rho);
    }

    out.final_state = std::move(state);
    out.final_energy = free_energy(mesh, stepper.potentials(), out.final_state.rho);
    return out;
}

}  // namespace chdbc
