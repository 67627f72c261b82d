// Direct solver for the stationary system: find (rho_s, zeta_s) and the
// constant chemical potential mu_s with
//
//   a(rho_s, v) + <beta_eps(rho_s) + pi(rho_s), v> = mu_s <(1,1), v>
//
// for every trace-coupled test pair v, under mean(rho_s) = m0. The mean
// constraint is enforced by one Lagrange multiplier, which the bordered
// Newton system identifies with mu_s itself.
#pragma once

#include "chdbc/mesh.hpp"
#include "chdbc/potentials.hpp"
#include "chdbc/solver.hpp"

namespace chdbc {

struct StationarySolution {
    BulkSurfaceField rho_s;
    BulkSurfaceField zeta_s;  // bulk selection beta_eps(rho_s)
    double mu_s = 0.0;
    double residual_norm = 0.0;
};

struct StationaryOptions {
    double tol = 1e-10;
    int max_iter = 60;
    int max_line_search = 40;
};

// Newton solve seeded at `guess` (defaulted to the constant field m0 when
// absent). Throws DomainError when m0 is not interior to D(beta_Gamma) and
// SolverError on Newton divergence.
StationarySolution solve_stationary(double m0, const StripMesh& mesh,
                                    const PotentialPair& pots,
                                    const BulkSurfaceField* guess = nullptr,
                                    const StationaryOptions& opts = {});

// Combined L2 norm of the discrete strong-form residual
//   bulk:    -Lap rho + beta_eps(rho) + pi(rho) - mu_s
//   surface: dnu rho - LapG rhoG + betaG_eps(rhoG) + piG(rhoG) - mu_s
// realized with the operators induced by the weak form, so an exact solve
// of the weak system drives it to the solver tolerance.
double stationary_residual(const BulkSurfaceField& candidate, double mu_s,
                           const StripMesh& mesh, const PotentialPair& pots);

// The constant mu minimizing stationary_residual over mu: the
// (|Omega|+|Gamma|)-weighted mean of the strong-form left side.
double best_fit_mu(const BulkSurfaceField& candidate, const StripMesh& mesh,
                   const PotentialPair& pots);

}  // namespace chdbc
