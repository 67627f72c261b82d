// Implicit time integration of the coupled bulk-surface system
//
//   d/dt rho + grad(rho).u - Lap mu = 0                       (bulk)
//   tauO d/dt rho - Lap rho + beta_eps(rho) + pi(rho) = mu    (bulk)
//   d/dt rhoG + dnu mu - LapG muG = 0                         (surface)
//   tauG d/dt rhoG + dnu rho - LapG rhoG
//        + betaG_eps(rhoG) + piG(rhoG) = muG                  (surface)
//
// posed weakly against trace-coupled test pairs. Backward Euler in time,
// monolithic Newton in (rho, mu) per step with the selection beta_eps(rho)
// eliminated pointwise into the Jacobian; the convection trilinear term
// uses rho^n and u(t^n) (explicit), so it vanishes for constant test
// functions and the generalized mean is conserved exactly up to the Newton
// tolerance.
#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <utility>
#include <vector>

#include "chdbc/mesh.hpp"
#include "chdbc/potentials.hpp"
#include "chdbc/velocity.hpp"

namespace chdbc {

// Bulk/surface potential pair with the shared Yosida parameter.
struct PotentialPair {
    PotentialSpec bulk = PotentialSpec::regular();
    PotentialSpec surface = PotentialSpec::regular();
    double eps = 1e-3;
};

struct SolverConfig {
    double tau_omega = 1.0;  // bulk viscosity, > 0
    double tau_gamma = 1.0;  // surface viscosity, > 0
    double dt = 1e-2;
    double t_end = 1.0;
    double newton_tol = 1e-10;
    int newton_max_iter = 30;
    double linear_tol = 1e-12;
    int max_line_search = 30;
    int max_dt_halvings = 10;

    void validate() const;
};

struct State {
    BulkSurfaceField rho;
    BulkSurfaceField mu;
    BulkSurfaceField zeta;  // bulk selection beta_eps(rho); trace rows carry
                            // beta_eps(rhoG), the surface selection is
                            // betaG_eps(rhoG) (see surface_selection)
    double t = 0.0;
};

// The surface selection zetaG = betaG_eps(rhoG) on the two wall circles.
SurfaceArrays surface_selection(const StripMesh& mesh, const PotentialPair& pots,
                                const BulkSurfaceField& rho);

struct InitialData {
    BulkSurfaceField rho0;
    double m0 = 0.0;  // derived generalized mean
};

// Validates the admissibility of rho0: bulk values in D(beta), trace values
// in D(betaG), m0 strictly interior to D(betaG). Values touching the domain
// boundary are inset by 1e-8 (a warning is printed).
InitialData make_initial_data(const StripMesh& mesh, const PotentialPair& pots,
                              BulkSurfaceField rho0);

// E(rho) = 1/2 |grad rho|^2 + 1/2 |gradG rhoG|^2 + int f_eps(rho) + int fG_eps(rhoG)
// with f_eps the Moreau envelope of beta_hat plus pi_hat.
double free_energy(const StripMesh& mesh, const PotentialPair& pots,
                   const BulkSurfaceField& rho);

// int_Omega rho u(t) . grad v, the convection trilinear form (edge-midpoint
// quadrature; exactly zero for constant v)
double convection_form(const StripMesh& mesh, const VelocityField& velocity,
                       const BulkSurfaceField& rho, double t,
                       const BulkSurfaceField& v);

class TimeStepper {
  public:
    TimeStepper(const StripMesh& mesh, const SolverConfig& config,
                const PotentialPair& pots, const VelocityField& velocity);

    // Chemical potential consistent with rho0 at t = 0 (linear solve of the
    // coupled pair for (d/dt rho(0), mu(0))).
    State initialize(const InitialData& init) const;

    // One backward-Euler step of length config.dt; on Newton divergence the
    // step is retried as two half steps, up to max_dt_halvings deep.
    State step(const State& s);

    // Residual loads of the implicit system for a candidate new state, as
    // dual pairs (R1: mass balance, R2: potential equation).
    std::pair<DualPair, DualPair> residual(const State& s_new, const State& s_old) const;

    const StripMesh& mesh() const { return mesh_; }
    const SolverConfig& config() const { return config_; }
    const PotentialPair& potentials() const { return pots_; }
    const VelocityField& velocity() const { return velocity_; }

  private:
    void residual_loads(const BulkSurfaceField& rho, const BulkSurfaceField& mu,
                        const BulkSurfaceField& rho_old, double t_old, double dt,
                        Eigen::VectorXd& r) const;
    double residual_norm(const Eigen::VectorXd& r) const;
    State newton_step(const State& s, double dt);
    State step_recursive(const State& s, double dt, int depth);
    void prepare_jacobian(double dt);

    StripMesh mesh_;
    SolverConfig config_;
    PotentialPair pots_;
    VelocityField velocity_;

    Eigen::SparseMatrix<double> stiffness_;
    Eigen::VectorXd w_;      // dof weights
    Eigen::VectorXd wb_;     // bulk quadrature weights
    Eigen::VectorXd ws_;     // surface quadrature weights (zero off the walls)
    Eigen::VectorXd wtau_;   // tauO*wb + tauG*ws

    // Newton system for the current dt; only the nonlinear diagonal changes
    // between iterations.
    Eigen::SparseMatrix<double> jac_;
    std::vector<int> diag_pos_;  // positions of the (n+k, k) entries
    Eigen::VectorXd base_diag_;  // their values without the nonlinear part
    double jac_dt_ = -1.0;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    bool pattern_ready_ = false;
};

}  // namespace chdbc
