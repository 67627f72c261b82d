// Trajectory instrumentation: per-step scalar records, the dissipation
// budget inequality, and the long-time verification that trajectory
// endpoints match stationary solutions with spatially constant chemical
// potential.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chdbc/mesh.hpp"
#include "chdbc/nsolver.hpp"
#include "chdbc/solver.hpp"
#include "chdbc/stationary.hpp"

namespace chdbc {

// Scalar diagnostics of one trajectory sample. The split gradient and
// time-derivative norms trail the combined ones so the budget inequality
// can be evaluated from a record stream alone.
struct DiagnosticsRecord {
    double t = 0.0;
    double mean_rho = 0.0;       // generalized mean of (rho, rhoG)
    double energy = 0.0;         // E(rho) with the regularized potentials
    double grad_mu_norm = 0.0;   // |grad mu|_Omega + |gradG muG|_Gamma
    double dtrho_norm = 0.0;     // combined L2 norm of the backward difference
    double mean_mu = 0.0;
    double hstar_dtrho = 0.0;    // dual norm ||d/dt rho||_* via the N operator
    double stat_residual = 0.0;  // stationary residual at the best-fit mu
    double grad_mu_bulk = 0.0;
    double grad_mu_surf = 0.0;
    double dtrho_bulk = 0.0;
    double dtrho_surf = 0.0;
};

std::string csv_header();
std::string csv_row(const DiagnosticsRecord& rec);

class Recorder {
  public:
    Recorder(const StripMesh& mesh, const PotentialPair& pots);

    // Diagnostics of `state` given the previous sample; for the initial
    // sample pass the state itself (time-derivative entries are zero).
    DiagnosticsRecord record(const State& state, const State& state_prev) const;

    const NSolver& nsolver() const { return nsolver_; }

  private:
    StripMesh mesh_;
    PotentialPair pots_;
    NSolver nsolver_;
};

struct BudgetReport {
    double dissipation = 0.0;  // sum of dt*(grad-mu and viscous terms)
    double budget = 0.0;       // E0 - E_final + velocity contribution
    bool pass = false;
};

// Checks sum dt (|grad mu|^2 + tauO |dtrho|^2 + tauG |dtrhoG|^2) against
// E0 - E_final + velocity_contribution_bound with 1% slack.
BudgetReport dissipation_budget(const std::vector<DiagnosticsRecord>& records,
                                double e0, double velocity_contribution_bound,
                                double tau_omega, double tau_gamma);

struct OmegaLimitTolerances {
    double staleness = 1e-5;  // required final dtrho_norm
    double distance = 1e-3;   // endpoint L2 distance to the matched solution
    double flatness = 1e-4;   // spatial standard deviation of mu
};

struct OmegaLimitReport {
    std::vector<double> sample_times;
    double endpoint_distance = 0.0;
    double mu_flatness = 0.0;
    double matched_mu_s = 0.0;
    double final_dtrho_norm = 0.0;
    bool pass = false;
};

// Spatial standard deviation of the pair (mu, muG) about its generalized mean.
double mu_flatness(const StripMesh& mesh, const BulkSurfaceField& mu);

struct RunResult;  // defined in runner.hpp

// Matches the trajectory endpoint against a stationary solve seeded from the
// endpoint itself (with the endpoint's own mean as the constraint). Throws
// StalenessError when the final dtrho_norm exceeds tolerances.staleness.
OmegaLimitReport verify_omega_limit(const RunResult& trajectory, const StripMesh& mesh,
                                    const PotentialPair& pots,
                                    const OmegaLimitTolerances& tolerances);

}  // namespace chdbc
