#include "chdbc/stationary.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace chdbc {

namespace {

// Loads of the stationary operator without the mu term:
//   L_k = a(rho, e_k) + <beta_eps(rho) + pi(rho), e_k>
Eigen::VectorXd stationary_loads(const StripMesh& mesh, const PotentialPair& pots,
                                 const Eigen::SparseMatrix<double>& A,
                                 const BulkSurfaceField& rho) {
    Eigen::VectorXd L = A * rho.values;
    for (int j = 0; j < mesh.ny; ++j)
        for (int i = 0; i < mesh.nx; ++i) {
            const int k = mesh.idx(i, j);
            const double r = rho.values[k];
            L[k] += mesh.bulk_weight(i, j) *
                    (pots.bulk.yosida(pots.eps, r) + pots.bulk.pi(r));
            if (mesh.is_wall(j))
                L[k] += mesh.surface_weight(i) *
                        (pots.surface.yosida(pots.eps, r) + pots.surface.pi(r));
        }
    return L;
}

double density_norm(const Eigen::VectorXd& loads, const Eigen::VectorXd& w) {
    double s = 0.0;
    for (int k = 0; k < loads.size(); ++k) s += loads[k] * loads[k] / w[k];
    return std::sqrt(s);
}

}  // namespace

double stationary_residual(const BulkSurfaceField& candidate, double mu_s,
                           const StripMesh& mesh, const PotentialPair& pots) {
    check_shape(mesh, candidate);
    const Eigen::SparseMatrix<double> A = assemble_stiffness(mesh);
    const Eigen::VectorXd w = dof_weights(mesh);
    const Eigen::VectorXd r = stationary_loads(mesh, pots, A, candidate) - mu_s * w;
    return density_norm(r, w);
}

double best_fit_mu(const BulkSurfaceField& candidate, const StripMesh& mesh,
                   const PotentialPair& pots) {
    check_shape(mesh, candidate);
    const Eigen::SparseMatrix<double> A = assemble_stiffness(mesh);
    return stationary_loads(mesh, pots, A, candidate).sum() / mesh.total_measure();
}

StationarySolution solve_stationary(double m0, const StripMesh& mesh,
                                    const PotentialPair& pots,
                                    const BulkSurfaceField* guess,
                                    const StationaryOptions& opts) {
    if (!pots.surface.beta_domain().strictly_inside(m0))
        throw DomainError("stationary solve: m0 = " + std::to_string(m0) +
                          " is not interior to D(beta_Gamma)");
    const int n = mesh.size();
    const Eigen::SparseMatrix<double> A = assemble_stiffness(mesh);
    const Eigen::VectorXd w = dof_weights(mesh);

    BulkSurfaceField rho = BulkSurfaceField::zeros(mesh);
    if (guess) {
        check_shape(mesh, *guess);
        rho = *guess;
    } else {
        rho.values.setConstant(m0);
    }
    double mu = best_fit_mu(rho, mesh, pots);

    // Bordered Newton system in (rho, mu): the multiplier of the mean
    // constraint is the constant chemical potential itself.
    auto full_residual = [&](const BulkSurfaceField& r, double m,
                             Eigen::VectorXd& out) {
        out.resize(n + 1);
        out.head(n) = stationary_loads(mesh, pots, A, r) - m * w;
        out[n] = w.dot(r.values) - m0 * mesh.total_measure();
    };
    auto norm_of = [&](const Eigen::VectorXd& r) {
        return std::sqrt(density_norm(r.head(n), w) * density_norm(r.head(n), w) +
                         (r[n] / mesh.total_measure()) * (r[n] / mesh.total_measure()));
    };

    Eigen::VectorXd res;
    full_residual(rho, mu, res);
    double norm = norm_of(res);

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool analyzed = false;
    int it = 0;
    while (norm > opts.tol) {
        if (it++ >= opts.max_iter)
            throw SolverError("stationary Newton: no convergence after " +
                              std::to_string(opts.max_iter) + " iterations (residual " +
                              std::to_string(norm) + ")");
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<size_t>(A.nonZeros()) + 3 * n);
        for (int k = 0; k < A.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator itA(A, k); itA; ++itA)
                trip.emplace_back(static_cast<int>(itA.row()),
                                  static_cast<int>(itA.col()), itA.value());
        for (int j = 0; j < mesh.ny; ++j)
            for (int i = 0; i < mesh.nx; ++i) {
                const int k = mesh.idx(i, j);
                const double r = rho.values[k];
                double d = mesh.bulk_weight(i, j) *
                           (pots.bulk.yosida_prime(pots.eps, r) + pots.bulk.pi_prime(r));
                if (mesh.is_wall(j))
                    d += mesh.surface_weight(i) * (pots.surface.yosida_prime(pots.eps, r) +
                                                   pots.surface.pi_prime(r));
                trip.emplace_back(k, k, d);
            }
        for (int k = 0; k < n; ++k) {
            trip.emplace_back(k, n, -w[k]);
            trip.emplace_back(n, k, w[k]);
        }
        Eigen::SparseMatrix<double> J(n + 1, n + 1);
        J.setFromTriplets(trip.begin(), trip.end());
        J.makeCompressed();
        if (!analyzed) {
            lu.analyzePattern(J);
            analyzed = true;
        }
        lu.factorize(J);
        if (lu.info() != Eigen::Success)
            throw SolverError("stationary Newton: factorization failed");
        const Eigen::VectorXd dx = lu.solve(-res);

        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls <= opts.max_line_search; ++ls) {
            BulkSurfaceField rho_t = rho;
            rho_t.values += alpha * dx.head(n);
            const double mu_t = mu + alpha * dx[n];
            Eigen::VectorXd res_t;
            full_residual(rho_t, mu_t, res_t);
            const double norm_t = norm_of(res_t);
            if (norm_t < norm) {
                rho = std::move(rho_t);
                mu = mu_t;
                res = std::move(res_t);
                norm = norm_t;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted)
            throw SolverError("stationary Newton: line search stalled at residual " +
                              std::to_string(norm));
    }

    StationarySolution sol;
    sol.rho_s = std::move(rho);
    sol.zeta_s = BulkSurfaceField::zeros(mesh);
    for (int k = 0; k < n; ++k)
        sol.zeta_s.values[k] = pots.bulk.yosida(pots.eps, sol.rho_s.values[k]);
    sol.mu_s = mu;
    sol.residual_norm = density_norm(res.head(n), w);
    return sol;
}

}  // namespace chdbc
