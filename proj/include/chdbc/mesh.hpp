// Discrete bulk-surface calculus on a 2D strip, periodic in x.
//
// The domain is [0,lx) x [0,ly] with nx periodic columns and ny rows of
// nodes (j=0 bottom wall, j=ny-1 top wall). The boundary consists of the
// two wall rows, each a periodic circle of length lx. Surface values are
// the wall rows of the bulk array itself, so the trace coupling
// vG = v|_Gamma holds exactly by construction.
//
// Quadrature: uniform weight hx along x (exact for constants, spectral for
// smooth periodic data), trapezoid along y. The coupled stiffness form
//   a(f,g) = int_Omega grad f . grad g + int_Gamma gradG fG . gradG gG
// is assembled as a sum over edges of first differences, which makes it
// exactly symmetric and positive semidefinite with kernel = constants.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "chdbc/errors.hpp"

namespace chdbc {

struct StripMesh {
    int nx = 0;       // columns (periodic direction), >= 4
    int ny = 0;       // node rows including both walls, >= 3
    double lx = 0.0;  // period in x
    double ly = 0.0;  // wall separation
    double hx = 0.0;  // lx / nx
    double hy = 0.0;  // ly / (ny - 1)

    int size() const { return nx * ny; }
    int idx(int i, int j) const { return j * nx + i; }
    double x(int i) const { return i * hx; }
    double y(int j) const { return j * hy; }
    bool is_wall(int j) const { return j == 0 || j == ny - 1; }

    // trapezoid weight in y
    double wy(int j) const { return is_wall(j) ? 0.5 * hy : hy; }
    double bulk_weight(int i, int j) const { (void)i; return hx * wy(j); }
    double surface_weight(int i) const { (void)i; return hx; }
    // weight of the combined pairing <(g,gG),(v,vG)> acting on one dof
    double dof_weight(int i, int j) const {
        return bulk_weight(i, j) + (is_wall(j) ? surface_weight(i) : 0.0);
    }

    double volume() const { return lx * ly; }
    double surface_area() const { return 2.0 * lx; }
    double total_measure() const { return volume() + surface_area(); }
};

StripMesh build_strip_mesh(int nx, int ny, double lx, double ly);

// Trace-coupled pair (v, vG): bulk node values; the surface values are the
// wall rows, shared storage keeps the trace identity exact.
struct BulkSurfaceField {
    int nx = 0, ny = 0;
    Eigen::VectorXd values;  // size nx*ny, index j*nx + i

    static BulkSurfaceField zeros(const StripMesh& mesh);
    template <class F>
    static BulkSurfaceField from_function(const StripMesh& mesh, F&& f) {
        BulkSurfaceField out = zeros(mesh);
        for (int j = 0; j < mesh.ny; ++j)
            for (int i = 0; i < mesh.nx; ++i)
                out.values[mesh.idx(i, j)] = f(mesh.x(i), mesh.y(j));
        return out;
    }

    double& at(int i, int j) { return values[j * nx + i]; }
    double at(int i, int j) const { return values[j * nx + i]; }
    double bottom(int i) const { return at(i, 0); }
    double top(int i) const { return at(i, ny - 1); }
};

// A load g* against the pairing <g*,(v,vG)> = int_Omega g v + int_Gamma gG vG,
// stored as densities with respect to the mesh quadrature. Unlike a field,
// the surface densities are independent of the wall rows of the bulk part.
struct DualPair {
    int nx = 0, ny = 0;
    Eigen::VectorXd bulk;         // size nx*ny
    Eigen::VectorXd bottom, top;  // size nx each
    bool zero_mean = false;       // producer tag; checked where required

    static DualPair zeros(const StripMesh& mesh);
    double& bulk_at(int i, int j) { return bulk[j * nx + i]; }
    double bulk_at(int i, int j) const { return bulk[j * nx + i]; }
};

struct SurfaceArrays {
    Eigen::VectorXd bottom, top;  // size nx each
};

void check_shape(const StripMesh& mesh, const BulkSurfaceField& f);
void check_shape(const StripMesh& mesh, const DualPair& g);

// Quadrature and means
double integrate_bulk(const StripMesh& mesh, const BulkSurfaceField& f);
double integrate_surface(const StripMesh& mesh, const BulkSurfaceField& f);
double generalized_mean(const StripMesh& mesh, const BulkSurfaceField& f);
double generalized_mean(const StripMesh& mesh, const DualPair& g);

// <g,(v,vG)> with the discrete quadrature
double pair(const StripMesh& mesh, const DualPair& g, const BulkSurfaceField& v);

// Combined L2 norm sqrt(int_Omega f^2 + int_Gamma fG^2); for a DualPair the
// densities are measured the same way.
double h_norm(const StripMesh& mesh, const BulkSurfaceField& f);
double h_norm(const StripMesh& mesh, const DualPair& g);

// Difference stencils. The bulk Laplacian uses the 5-point stencil with a
// one-sided d2/dy2 at the walls; the surface Laplacian is the periodic
// 3-point stencil on each circle; the normal derivative is the second-order
// one-sided difference pointing out of Omega.
BulkSurfaceField bulk_laplacian(const StripMesh& mesh, const BulkSurfaceField& f);
SurfaceArrays surface_laplacian(const StripMesh& mesh, const BulkSurfaceField& f);
SurfaceArrays normal_derivative(const StripMesh& mesh, const BulkSurfaceField& f);

// The coupled stiffness form and its pieces
double stiffness_form(const StripMesh& mesh, const BulkSurfaceField& f,
                      const BulkSurfaceField& g);
double grad_sq_bulk(const StripMesh& mesh, const BulkSurfaceField& f);
double grad_sq_surface(const StripMesh& mesh, const BulkSurfaceField& f);

// a(f,.) as a dual load: <stiffness_apply(f), v> == stiffness_form(f,v)
// exactly for every v. On interior rows the bulk density is minus the
// 5-point Laplacian; at the walls the load splits into the tangential part
// (kept in the bulk density) and the flux + Laplace-Beltrami part (surface
// density), mirroring the integration by parts.
DualPair stiffness_apply(const StripMesh& mesh, const BulkSurfaceField& f);

// Nodal-load assembly used by the linear solvers: (A v)_k = a(v, e_k).
Eigen::SparseMatrix<double> assemble_stiffness(const StripMesh& mesh);

// b_k = <g, e_k> for the dof basis, and the dof weights w_k = <(1,1), e_k>.
Eigen::VectorXd nodal_loads(const StripMesh& mesh, const DualPair& g);
Eigen::VectorXd dof_weights(const StripMesh& mesh);

}  // namespace chdbc
