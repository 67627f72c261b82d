#include "chdbc/solver.hpp"

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

namespace chdbc {

void SolverConfig::validate() const {
    if (!(tau_omega > 0.0) || !(tau_gamma > 0.0))
        throw ConfigError("viscosities tau_omega and tau_gamma must be strictly positive");
    if (!(dt > 0.0)) throw ConfigError("time step dt must be positive");
    if (t_end < 0.0) throw ConfigError("t_end must be nonnegative");
    if (!(newton_tol > 0.0) || !(linear_tol > 0.0))
        throw ConfigError("solver tolerances must be positive");
    if (newton_max_iter < 1) throw ConfigError("newton_max_iter must be at least 1");
}

SurfaceArrays surface_selection(const StripMesh& mesh, const PotentialPair& pots,
                                const BulkSurfaceField& rho) {
    check_shape(mesh, rho);
    SurfaceArrays z;
    z.bottom = Eigen::VectorXd::Zero(mesh.nx);
    z.top = Eigen::VectorXd::Zero(mesh.nx);
    for (int i = 0; i < mesh.nx; ++i) {
        z.bottom[i] = pots.surface.yosida(pots.eps, rho.bottom(i));
        z.top[i] = pots.surface.yosida(pots.eps, rho.top(i));
    }
    return z;
}

InitialData make_initial_data(const StripMesh& mesh, const PotentialPair& pots,
                              BulkSurfaceField rho0) {
    check_shape(mesh, rho0);
    constexpr double inset = 1e-8;
    int adjusted = 0;
    for (int j = 0; j < mesh.ny; ++j) {
        const Interval& dom =
            mesh.is_wall(j) ? pots.surface.beta_domain() : pots.bulk.beta_domain();
        for (int i = 0; i < mesh.nx; ++i) {
            double& r = rho0.at(i, j);
            if (r < dom.lo || r > dom.hi)
                throw DomainError("initial datum leaves the potential domain at node (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
            const double lo = std::isfinite(dom.lo) ? dom.lo + inset : -HUGE_VAL;
            const double hi = std::isfinite(dom.hi) ? dom.hi - inset : HUGE_VAL;
            if (r < lo || r > hi) {
                r = std::clamp(r, lo, hi);
                ++adjusted;
            }
        }
    }
    if (adjusted > 0)
        std::cerr << "warning: inset " << adjusted
                  << " initial values away from the potential domain boundary\n";
    InitialData init;
    init.m0 = generalized_mean(mesh, rho0);
    init.rho0 = std::move(rho0);
    if (!pots.surface.beta_domain().strictly_inside(init.m0))
        throw DomainError("initial mean m0 = " + std::to_string(init.m0) +
                          " is not interior to D(beta_Gamma)");
    return init;
}

double free_energy(const StripMesh& mesh, const PotentialPair& pots,
                   const BulkSurfaceField& rho) {
    check_shape(mesh, rho);
    double e = 0.5 * grad_sq_bulk(mesh, rho) + 0.5 * grad_sq_surface(mesh, rho);
    for (int j = 0; j < mesh.ny; ++j)
        for (int i = 0; i < mesh.nx; ++i)
            e += mesh.bulk_weight(i, j) * pots.bulk.moreau_f(pots.eps, rho.at(i, j));
    for (int i = 0; i < mesh.nx; ++i)
        e += mesh.surface_weight(i) * (pots.surface.moreau_f(pots.eps, rho.bottom(i)) +
                                       pots.surface.moreau_f(pots.eps, rho.top(i)));
    return e;
}

namespace {

// Loads of the convection form: C_k = int rho u . grad e_k, accumulated from
// edge-midpoint fluxes. Constant test functions receive exactly zero.
Eigen::VectorXd convection_loads(const StripMesh& mesh, const VelocityField& vel,
                                 const BulkSurfaceField& rho, double t) {
    Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.size());
    if (vel.kind == VelocityKind::Zero) return load;
    double u1, u2;
    for (int j = 0; j < mesh.ny; ++j) {
        const double cy = mesh.wy(j);
        for (int i = 0; i < mesh.nx; ++i) {
            const int ip = (i + 1) % mesh.nx;
            vel.eval(mesh.x(i) + 0.5 * mesh.hx, mesh.y(j), mesh.ly, t, u1, u2);
            const double flux = cy * 0.5 * (rho.at(i, j) + rho.at(ip, j)) * u1;
            load[mesh.idx(ip, j)] += flux;
            load[mesh.idx(i, j)] -= flux;
        }
    }
    for (int j = 0; j + 1 < mesh.ny; ++j)
        for (int i = 0; i < mesh.nx; ++i) {
            vel.eval(mesh.x(i), mesh.y(j) + 0.5 * mesh.hy, mesh.ly, t, u1, u2);
            const double flux = mesh.hx * 0.5 * (rho.at(i, j) + rho.at(i, j + 1)) * u2;
            load[mesh.idx(i, j + 1)] += flux;
            load[mesh.idx(i, j)] -= flux;
        }
    return load;
}

struct NewtonFailure {
    std::string reason;
};

}  // namespace

double convection_form(const StripMesh& mesh, const VelocityField& velocity,
                       const BulkSurfaceField& rho, double t,
                       const BulkSurfaceField& v) {
    check_shape(mesh, rho);
    check_shape(mesh, v);
    return convection_loads(mesh, velocity, rho, t).dot(v.values);
}

TimeStepper::TimeStepper(const StripMesh& mesh, const SolverConfig& config,
                         const PotentialPair& pots, const VelocityField& velocity)
    : mesh_(mesh), config_(config), pots_(pots), velocity_(velocity) {
    config_.validate();
    if (!(pots_.eps > 0.0)) throw ConfigError("Yosida parameter eps must be positive");
    stiffness_ = assemble_stiffness(mesh_);
    w_ = dof_weights(mesh_);
    wb_ = Eigen::VectorXd::Zero(mesh_.size());
    ws_ = Eigen::VectorXd::Zero(mesh_.size());
    for (int j = 0; j < mesh_.ny; ++j)
        for (int i = 0; i < mesh_.nx; ++i) {
            wb_[mesh_.idx(i, j)] = mesh_.bulk_weight(i, j);
            if (mesh_.is_wall(j)) ws_[mesh_.idx(i, j)] = mesh_.surface_weight(i);
        }
    wtau_ = config_.tau_omega * wb_ + config_.tau_gamma * ws_;
}

void TimeStepper::residual_loads(const BulkSurfaceField& rho, const BulkSurfaceField& mu,
                                 const BulkSurfaceField& rho_old, double t_old,
                                 double dt, Eigen::VectorXd& r) const {
    const int n = mesh_.size();
    const Eigen::VectorXd drho = (rho.values - rho_old.values) / dt;
    const Eigen::VectorXd conv = convection_loads(mesh_, velocity_, rho_old, t_old);
    r.resize(2 * n);
    r.head(n) = w_.cwiseProduct(drho) - conv + stiffness_ * mu.values;
    Eigen::VectorXd chi(n);
    for (int k = 0; k < n; ++k) {
        const double rk = rho.values[k];
        chi[k] = wb_[k] * (pots_.bulk.yosida(pots_.eps, rk) + pots_.bulk.pi(rk));
        if (ws_[k] != 0.0)
            chi[k] += ws_[k] * (pots_.surface.yosida(pots_.eps, rk) + pots_.surface.pi(rk));
    }
    r.tail(n) = wtau_.cwiseProduct(drho) + stiffness_ * rho.values + chi -
                w_.cwiseProduct(mu.values);
}

double TimeStepper::residual_norm(const Eigen::VectorXd& r) const {
    const int n = mesh_.size();
    double s = 0.0;
    for (int k = 0; k < n; ++k)
        s += (r[k] * r[k] + r[n + k] * r[n + k]) / w_[k];
    return std::sqrt(s);
}

std::pair<DualPair, DualPair> TimeStepper::residual(const State& s_new,
                                                    const State& s_old) const {
    Eigen::VectorXd r;
    residual_loads(s_new.rho, s_new.mu, s_old.rho, s_old.t, s_new.t - s_old.t, r);
    const int n = mesh_.size();
    auto to_density = [&](const Eigen::VectorXd& load) {
        DualPair d = DualPair::zeros(mesh_);
        d.bulk = load.cwiseQuotient(w_);
        for (int i = 0; i < mesh_.nx; ++i) {
            d.bottom[i] = d.bulk[mesh_.idx(i, 0)];
            d.top[i] = d.bulk[mesh_.idx(i, mesh_.ny - 1)];
        }
        return d;
    };
    return {to_density(r.head(n)), to_density(r.tail(n))};
}

void TimeStepper::prepare_jacobian(double dt) {
    if (pattern_ready_ && dt == jac_dt_) return;
    const int n = mesh_.size();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(stiffness_.nonZeros()) * 2 + 3 * n);
    for (int k = 0; k < stiffness_.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness_, k); it; ++it) {
            const int row = static_cast<int>(it.row());
            const int col = static_cast<int>(it.col());
            trip.emplace_back(row, n + col, it.value());      // dR1/dmu
            trip.emplace_back(n + row, col, it.value());      // dR2/drho (linear part)
        }
    for (int k = 0; k < n; ++k) {
        trip.emplace_back(k, k, w_[k] / dt);                  // dR1/drho
        trip.emplace_back(n + k, k, wtau_[k] / dt);           // merged with A diagonal
        trip.emplace_back(n + k, n + k, -w_[k]);              // dR2/dmu
    }
    jac_.resize(2 * n, 2 * n);
    jac_.setFromTriplets(trip.begin(), trip.end());
    jac_.makeCompressed();

    diag_pos_.assign(n, -1);
    const int* outer = jac_.outerIndexPtr();
    const int* inner = jac_.innerIndexPtr();
    for (int col = 0; col < n; ++col)
        for (int p = outer[col]; p < outer[col + 1]; ++p)
            if (inner[p] == n + col) {
                diag_pos_[col] = p;
                break;
            }
    base_diag_.resize(n);
    for (int k = 0; k < n; ++k) base_diag_[k] = jac_.valuePtr()[diag_pos_[k]];

    lu_.analyzePattern(jac_);
    jac_dt_ = dt;
    pattern_ready_ = true;
}

State TimeStepper::newton_step(const State& s, double dt) {
    prepare_jacobian(dt);
    const int n = mesh_.size();
    const double t_new = s.t + dt;

    BulkSurfaceField rho = s.rho, mu = s.mu;
    Eigen::VectorXd r;
    residual_loads(rho, mu, s.rho, s.t, dt, r);
    double norm = residual_norm(r);

    int it = 0;
    while (norm > config_.newton_tol) {
        if (it++ >= config_.newton_max_iter)
            throw NewtonFailure{"no convergence after " +
                                std::to_string(config_.newton_max_iter) + " iterations"};
        for (int k = 0; k < n; ++k) {
            const double rk = rho.values[k];
            double d = wb_[k] * (pots_.bulk.yosida_prime(pots_.eps, rk) +
                                 pots_.bulk.pi_prime(rk));
            if (ws_[k] != 0.0)
                d += ws_[k] * (pots_.surface.yosida_prime(pots_.eps, rk) +
                               pots_.surface.pi_prime(rk));
            jac_.valuePtr()[diag_pos_[k]] = base_diag_[k] + d;
        }
        lu_.factorize(jac_);
        if (lu_.info() != Eigen::Success)
            throw NewtonFailure{"Jacobian factorization failed"};
        const Eigen::VectorXd dx = lu_.solve(-r);
        if ((jac_ * dx + r).norm() > config_.linear_tol * std::max(1.0, r.norm()))
            throw NewtonFailure{"inner linear solve above linear_tol"};

        // residual-norm line search with halving
        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls <= config_.max_line_search; ++ls) {
            BulkSurfaceField rho_t = rho, mu_t = mu;
            rho_t.values += alpha * dx.head(n);
            mu_t.values += alpha * dx.tail(n);
            Eigen::VectorXd r_t;
            residual_loads(rho_t, mu_t, s.rho, s.t, dt, r_t);
            const double norm_t = residual_norm(r_t);
            if (norm_t < norm) {
                rho = std::move(rho_t);
                mu = std::move(mu_t);
                r = std::move(r_t);
                norm = norm_t;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) throw NewtonFailure{"line search stalled at residual " +
                                           std::to_string(norm)};
    }

    State out;
    out.rho = std::move(rho);
    out.mu = std::move(mu);
    out.zeta = BulkSurfaceField::zeros(mesh_);
    for (int k = 0; k < n; ++k)
        out.zeta.values[k] = pots_.bulk.yosida(pots_.eps, out.rho.values[k]);
    out.t = t_new;
    return out;
}

State TimeStepper::step_recursive(const State& s, double dt, int depth) {
    try {
        return newton_step(s, dt);
    } catch (const NewtonFailure& f) {
        if (depth >= config_.max_dt_halvings)
            throw SolverError("Newton divergence at t = " + std::to_string(s.t) +
                              " after " + std::to_string(depth) +
                              " dt halvings: " + f.reason);
        const State half = step_recursive(s, 0.5 * dt, depth + 1);
        return step_recursive(half, 0.5 * dt, depth + 1);
    }
}

State TimeStepper::step(const State& s) {
    check_shape(mesh_, s.rho);
    check_shape(mesh_, s.mu);
    const double m_old = generalized_mean(mesh_, s.rho);
    State out = step_recursive(s, config_.dt, 0);
    const double drift = std::abs(generalized_mean(mesh_, out.rho) - m_old);
    if (drift > 1e-10)
        throw SolverError("conservation drift " + std::to_string(drift) +
                          " above 1e-10 in one step");
    return out;
}

State TimeStepper::initialize(const InitialData& init) const {
    check_shape(mesh_, init.rho0);
    const int n = mesh_.size();

    // linear consistency solve for (d/dt rho(0), mu(0)):
    //   M q + A mu = C(rho0, u(0))
    //   Mtau q - M mu = -(A rho0 + chi(rho0))
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(stiffness_.nonZeros()) + 3 * n);
    for (int k = 0; k < stiffness_.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness_, k); it; ++it)
            trip.emplace_back(static_cast<int>(it.row()), n + static_cast<int>(it.col()),
                              it.value());
    for (int k = 0; k < n; ++k) {
        trip.emplace_back(k, k, w_[k]);
        trip.emplace_back(n + k, k, wtau_[k]);
        trip.emplace_back(n + k, n + k, -w_[k]);
    }
    Eigen::SparseMatrix<double> J(2 * n, 2 * n);
    J.setFromTriplets(trip.begin(), trip.end());
    J.makeCompressed();

    Eigen::VectorXd rhs(2 * n);
    rhs.head(n) = convection_loads(mesh_, velocity_, init.rho0, 0.0);
    Eigen::VectorXd chi(n);
    for (int k = 0; k < n; ++k) {
        const double rk = init.rho0.values[k];
        chi[k] = wb_[k] * (pots_.bulk.yosida(pots_.eps, rk) + pots_.bulk.pi(rk));
        if (ws_[k] != 0.0)
            chi[k] += ws_[k] * (pots_.surface.yosida(pots_.eps, rk) + pots_.surface.pi(rk));
    }
    rhs.tail(n) = -(stiffness_ * init.rho0.values + chi);

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success)
        throw SolverError("initial chemical potential: factorization failed");
    const Eigen::VectorXd sol = lu.solve(rhs);

    State s;
    s.rho = init.rho0;
    s.mu = BulkSurfaceField::zeros(mesh_);
    s.mu.values = sol.tail(n);
    s.zeta = BulkSurfaceField::zeros(mesh_);
    for (int k = 0; k < n; ++k)
        s.zeta.values[k] = pots_.bulk.yosida(pots_.eps, s.rho.values[k]);
    s.t = 0.0;
    return s;
}

}  // namespace chdbc
