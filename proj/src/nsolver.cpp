#include "chdbc/nsolver.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace chdbc {

NSolver::NSolver(const StripMesh& mesh) : mesh_(mesh) {
    const int n = mesh.size();
    weights_ = dof_weights(mesh);
    Eigen::SparseMatrix<double> A = assemble_stiffness(mesh);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(A.nonZeros()) + 2 * n);
    for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
            trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int k = 0; k < n; ++k) {
        trip.emplace_back(k, n, weights_[k]);
        trip.emplace_back(n, k, weights_[k]);
    }
    bordered_.resize(n + 1, n + 1);
    bordered_.setFromTriplets(trip.begin(), trip.end());
    bordered_.makeCompressed();

    lu_.compute(bordered_);
    if (lu_.info() != Eigen::Success)
        throw SolverError("N operator: factorization of the bordered system failed");
}

BulkSurfaceField NSolver::solve(const DualPair& g, double tol, double mean_tol) const {
    check_shape(mesh_, g);
    const double m = generalized_mean(mesh_, g);
    if (std::abs(m) > mean_tol)
        throw DomainError("N operator requires a zero-mean load, got mean " + std::to_string(m));

    const int n = mesh_.size();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs.head(n) = nodal_loads(mesh_, g);
    Eigen::VectorXd sol = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success)
        throw SolverError("N operator: linear solve failed");

    const double scale = std::max(1.0, rhs.head(n).norm());
    const double res = (bordered_ * sol - rhs).norm();
    if (res > tol * scale)
        throw SolverError("N operator: residual " + std::to_string(res) + " above tolerance");

    BulkSurfaceField xi = BulkSurfaceField::zeros(mesh_);
    xi.values = sol.head(n);
    return xi;
}

double NSolver::h_star_norm(const DualPair& g, double tol) const {
    const BulkSurfaceField xi = solve(g, tol);
    const double q = pair(mesh_, g, xi);
    return std::sqrt(std::max(0.0, q));
}

}  // namespace chdbc
