#include "chdbc/diagnostics.hpp"

#include <cmath>
#include <cstdio>

#include "chdbc/runner.hpp"

namespace chdbc {

std::string csv_header() {
    return "t,mean_rho,energy,grad_mu_norm,dtrho_norm,mean_mu,hstar_dtrho,"
           "stat_residual,grad_mu_bulk,grad_mu_surf,dtrho_bulk,dtrho_surf";
}

namespace {

void append_g17(std::string& out, double v, bool first) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), first ? "%.17g" : ",%.17g", v);
    out += buf;
}

}  // namespace

std::string csv_row(const DiagnosticsRecord& r) {
    std::string out;
    append_g17(out, r.t, true);
    append_g17(out, r.mean_rho, false);
    append_g17(out, r.energy, false);
    append_g17(out, r.grad_mu_norm, false);
    append_g17(out, r.dtrho_norm, false);
    append_g17(out, r.mean_mu, false);
    append_g17(out, r.hstar_dtrho, false);
    append_g17(out, r.stat_residual, false);
    append_g17(out, r.grad_mu_bulk, false);
    append_g17(out, r.grad_mu_surf, false);
    append_g17(out, r.dtrho_bulk, false);
    append_g17(out, r.dtrho_surf, false);
    return out;
}

Recorder::Recorder(const StripMesh& mesh, const PotentialPair& pots)
    : mesh_(mesh), pots_(pots), nsolver_(mesh) {}

DiagnosticsRecord Recorder::record(const State& state, const State& state_prev) const {
    check_shape(mesh_, state.rho);
    check_shape(mesh_, state.mu);
    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.mean_rho = generalized_mean(mesh_, state.rho);
    rec.energy = free_energy(mesh_, pots_, state.rho);
    rec.grad_mu_bulk = std::sqrt(grad_sq_bulk(mesh_, state.mu));
    rec.grad_mu_surf = std::sqrt(grad_sq_surface(mesh_, state.mu));
    rec.grad_mu_norm = rec.grad_mu_bulk + rec.grad_mu_surf;
    rec.mean_mu = generalized_mean(mesh_, state.mu);

    const double dt = state.t - state_prev.t;
    if (dt > 0.0) {
        BulkSurfaceField dtrho = state.rho;
        dtrho.values = (state.rho.values - state_prev.rho.values) / dt;
        double b2 = 0.0;
        for (int j = 0; j < mesh_.ny; ++j)
            for (int i = 0; i < mesh_.nx; ++i) {
                const double v = dtrho.at(i, j);
                b2 += mesh_.bulk_weight(i, j) * v * v;
            }
        double s2 = 0.0;
        for (int i = 0; i < mesh_.nx; ++i)
            s2 += mesh_.surface_weight(i) *
                  (dtrho.bottom(i) * dtrho.bottom(i) + dtrho.top(i) * dtrho.top(i));
        rec.dtrho_bulk = std::sqrt(b2);
        rec.dtrho_surf = std::sqrt(s2);
        rec.dtrho_norm = std::sqrt(b2 + s2);

        // Conservation makes the backward difference mean-zero up to the
        // Newton tolerance; remove that remainder before inverting.
        DualPair g = DualPair::zeros(mesh_);
        const double m = generalized_mean(mesh_, dtrho);
        g.bulk = dtrho.values.array() - m;
        for (int i = 0; i < mesh_.nx; ++i) {
            g.bottom[i] = g.bulk[mesh_.idx(i, 0)];
            g.top[i] = g.bulk[mesh_.idx(i, mesh_.ny - 1)];
        }
        g.zero_mean = true;
        rec.hstar_dtrho = nsolver_.h_star_norm(g);
    }

    rec.stat_residual =
        stationary_residual(state.rho, best_fit_mu(state.rho, mesh_, pots_), mesh_, pots_);
    return rec;
}

BudgetReport dissipation_budget(const std::vector<DiagnosticsRecord>& records,
                                double e0, double velocity_contribution_bound,
                                double tau_omega, double tau_gamma) {
    BudgetReport rep;
    double lhs = 0.0;
    for (size_t k = 1; k < records.size(); ++k) {
        const DiagnosticsRecord& r = records[k];
        const double dt = r.t - records[k - 1].t;
        lhs += dt * (r.grad_mu_bulk * r.grad_mu_bulk + r.grad_mu_surf * r.grad_mu_surf +
                     tau_omega * r.dtrho_bulk * r.dtrho_bulk +
                     tau_gamma * r.dtrho_surf * r.dtrho_surf);
    }
    const double e_final = records.empty() ? e0 : records.back().energy;
    rep.dissipation = lhs;
    rep.budget = e0 - e_final + velocity_contribution_bound;
    rep.pass = lhs <= rep.budget + 0.01 * std::abs(rep.budget) + 1e-12 * (1.0 + std::abs(e0));
    return rep;
}

double mu_flatness(const StripMesh& mesh, const BulkSurfaceField& mu) {
    const double m = generalized_mean(mesh, mu);
    double s = 0.0;
    for (int j = 0; j < mesh.ny; ++j)
        for (int i = 0; i < mesh.nx; ++i) {
            const double d = mu.at(i, j) - m;
            s += mesh.bulk_weight(i, j) * d * d;
        }
    for (int i = 0; i < mesh.nx; ++i) {
        const double db = mu.bottom(i) - m, dt = mu.top(i) - m;
        s += mesh.surface_weight(i) * (db * db + dt * dt);
    }
    return std::sqrt(s / mesh.total_measure());
}

OmegaLimitReport verify_omega_limit(const RunResult& trajectory, const StripMesh& mesh,
                                    const PotentialPair& pots,
                                    const OmegaLimitTolerances& tolerances) {
    if (trajectory.records.empty())
        throw StalenessError("trajectory carries no diagnostics records");
    OmegaLimitReport rep;
    rep.sample_times = trajectory.snapshot_times;
    rep.final_dtrho_norm = trajectory.records.back().dtrho_norm;
    if (trajectory.steps > 0 && rep.final_dtrho_norm > tolerances.staleness)
        throw StalenessError(
            "trajectory not stationary at t_end: |d/dt rho| = " +
            std::to_string(rep.final_dtrho_norm) + " above the staleness threshold " +
            std::to_string(tolerances.staleness) + "; extend t_end");

    const BulkSurfaceField& endpoint = trajectory.final_state.rho;
    const double m = generalized_mean(mesh, endpoint);
    const StationarySolution sol = solve_stationary(m, mesh, pots, &endpoint);

    BulkSurfaceField diff = endpoint;
    diff.values = endpoint.values - sol.rho_s.values;
    rep.endpoint_distance = h_norm(mesh, diff);
    rep.mu_flatness = mu_flatness(mesh, trajectory.final_state.mu);
    rep.matched_mu_s = sol.mu_s;
    rep.pass = rep.endpoint_distance <= tolerances.distance &&
               rep.mu_flatness <= tolerances.flatness && std::isfinite(sol.mu_s);
    return rep;
}

}  // namespace chdbc
