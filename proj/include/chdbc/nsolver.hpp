// Inverse of the coupled bulk-surface Laplacian on zero-mean loads.
//
// For a zero-mean load g the operator returns the unique zero-mean pair xi
// with a(xi, v) = <g, v> for every test pair v. The mean constraint is
// enforced by a single Lagrange multiplier; the bordered system
//   [ A  w ] [xi    ]   [b]
//   [ w^T 0 ] [lambda] = [0]
// (w the dof weights, b the nodal loads of g) is factorized once per mesh
// and reused across solves. The induced dual norm is ||g||_* = sqrt(<g, Ng>).
#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "chdbc/mesh.hpp"

namespace chdbc {

class NSolver {
  public:
    explicit NSolver(const StripMesh& mesh);

    // requires |mean(g)| <= mean_tol; residual of the defining problem is
    // checked against tol
    BulkSurfaceField solve(const DualPair& g, double tol = 1e-10,
                           double mean_tol = 1e-10) const;

    double h_star_norm(const DualPair& g, double tol = 1e-10) const;

    const StripMesh& mesh() const { return mesh_; }

  private:
    StripMesh mesh_;
    Eigen::SparseMatrix<double> bordered_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    Eigen::VectorXd weights_;
};

}  // namespace chdbc
