#include "chdbc/mesh.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace chdbc {

StripMesh build_strip_mesh(int nx, int ny, double lx, double ly) {
    if (nx < 4 || ny < 3)
        throw ConfigError("strip mesh too small: need nx >= 4 and ny >= 3, got nx=" +
                          std::to_string(nx) + " ny=" + std::to_string(ny));
    if (!(lx > 0.0) || !(ly > 0.0))
        throw ConfigError("strip mesh lengths must be positive");
    StripMesh m;
    m.nx = nx;
    m.ny = ny;
    m.lx = lx;
    m.ly = ly;
    m.hx = lx / nx;
    m.hy = ly / (ny - 1);
    return m;
}

BulkSurfaceField BulkSurfaceField::zeros(const StripMesh& mesh) {
    BulkSurfaceField f;
    f.nx = mesh.nx;
    f.ny = mesh.ny;
    f.values = Eigen::VectorXd::Zero(mesh.size());
    return f;
}

DualPair DualPair::zeros(const StripMesh& mesh) {
    DualPair g;
    g.nx = mesh.nx;
    g.ny = mesh.ny;
    g.bulk = Eigen::VectorXd::Zero(mesh.size());
    g.bottom = Eigen::VectorXd::Zero(mesh.nx);
    g.top = Eigen::VectorXd::Zero(mesh.nx);
    return g;
}

void check_shape(const StripMesh& mesh, const BulkSurfaceField& f) {
    if (f.nx != mesh.nx || f.ny != mesh.ny || f.values.size() != mesh.size())
        throw ShapeError("field shape does not match mesh");
}

void check_shape(const StripMesh& mesh, const DualPair& g) {
    if (g.nx != mesh.nx || g.ny != mesh.ny || g.bulk.size() != mesh.size() ||
        g.bottom.size() != mesh.nx || g.top.size() != mesh.nx)
        throw ShapeError("dual pair shape does not match mesh");
}

double integrate_bulk(const StripMesh& mesh, const BulkSurfaceField& f) {
    check_shape(mesh, f);
    double s = 0.0;
    for (int j = 0; j < mesh.ny; ++j) {
        double row = 0.0;
        for (int i = 0; i < mesh.nx; ++i) row += f.at(i, j);
        s += mesh.hx * mesh.wy(j) * row;
    }
    return s;
}

double integrate_surface(const StripMesh& mesh, const BulkSurfaceField& f) {
    check_shape(mesh, f);
    double s = 0.0;
    for (int i = 0; i < mesh.nx; ++i) s += f.bottom(i) + f.top(i);
    return mesh.hx * s;
}

double generalized_mean(const StripMesh& mesh, const BulkSurfaceField& f) {
    return (integrate_bulk(mesh, f) + integrate_surface(mesh, f)) / mesh.total_measure();
}

double generalized_mean(const StripMesh& mesh, const DualPair& g) {
    check_shape(mesh, g);
    double s = 0.0;
    for (int j = 0; j < mesh.ny; ++j)
        for (int i = 0; i < mesh.nx; ++i) s += mesh.bulk_weight(i, j) * g.bulk_at(i, j);
    for (int i = 0; i < mesh.nx; ++i)
        s += mesh.surface_weight(i) * (g.bottom[i] + g.top[i]);
    return s / mesh.total_measure();
}

double pair(const StripMesh& mesh, const DualPair& g, const BulkSurfaceField& v) {
    check_shape(mesh, g);
    check_shape(mesh, v);
    double s = 0.0;
    for (int j = 0; j < mesh.ny; ++j)
        for (int i = 0; i < mesh.nx; ++i)
            s += mesh.bulk_weight(i, j) * g.bulk_at(i, j) * v.at(i, j);
    for (int i = 0; i < mesh.nx; ++i)
        s += mesh.surface_weight(i) * (g.bottom[i] * v.bottom(i) + g.top[i] * v.top(i));
    return s;
}

double h_norm(const StripMesh& mesh, const BulkSurfaceField& f) {
    check_shape(mesh, f);
    double s = 0.0;
    for (int j = 0; j < mesh.ny; ++j)
        for (int i = 0; i < mesh.nx; ++i) {
            const double v = f.at(i, j);
            s += mesh.bulk_weight(i, j) * v * v;
        }
    for (int i = 0; i < mesh.nx; ++i) {
        s += mesh.surface_weight(i) * (f.bottom(i) * f.bottom(i) + f.top(i) * f.top(i));
    }
    return std::sqrt(s);
}

double h_norm(const StripMesh& mesh, const DualPair& g) {
    check_shape(mesh, g);
    double s = 0.0;
    for (int j = 0; j < mesh.ny; ++j)
        for (int i = 0; i < mesh.nx; ++i) {
            const double v = g.bulk_at(i, j);
            s += mesh.bulk_weight(i, j) * v * v;
        }
    for (int i = 0; i < mesh.nx; ++i)
        s += mesh.surface_weight(i) * (g.bottom[i] * g.bottom[i] + g.top[i] * g.top[i]);
    return std::sqrt(s);
}

BulkSurfaceField bulk_laplacian(const StripMesh& mesh, const BulkSurfaceField& f) {
    check_shape(mesh, f);
    BulkSurfaceField out = BulkSurfaceField::zeros(mesh);
    const double ihx2 = 1.0 / (mesh.hx * mesh.hx);
    const double ihy2 = 1.0 / (mesh.hy * mesh.hy);
    const int nx = mesh.nx, ny = mesh.ny;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1) % nx, im = (i + nx - 1) % nx;
            const double dxx = (f.at(ip, j) - 2.0 * f.at(i, j) + f.at(im, j)) * ihx2;
            double dyy;
            if (j > 0 && j < ny - 1) {
                dyy = (f.at(i, j + 1) - 2.0 * f.at(i, j) + f.at(i, j - 1)) * ihy2;
            } else if (j == 0) {
                dyy = (ny >= 4)
                          ? (2.0 * f.at(i, 0) - 5.0 * f.at(i, 1) + 4.0 * f.at(i, 2) - f.at(i, 3)) * ihy2
                          : (f.at(i, 0) - 2.0 * f.at(i, 1) + f.at(i, 2)) * ihy2;
            } else {
                dyy = (ny >= 4)
                          ? (2.0 * f.at(i, ny - 1) - 5.0 * f.at(i, ny - 2) + 4.0 * f.at(i, ny - 3) -
                             f.at(i, ny - 4)) * ihy2
                          : (f.at(i, ny - 1) - 2.0 * f.at(i, ny - 2) + f.at(i, ny - 3)) * ihy2;
            }
            out.at(i, j) = dxx + dyy;
        }
    }
    return out;
}

SurfaceArrays surface_laplacian(const StripMesh& mesh, const BulkSurfaceField& f) {
    check_shape(mesh, f);
    SurfaceArrays out;
    out.bottom = Eigen::VectorXd::Zero(mesh.nx);
    out.top = Eigen::VectorXd::Zero(mesh.nx);
    const double ihx2 = 1.0 / (mesh.hx * mesh.hx);
    for (int i = 0; i < mesh.nx; ++i) {
        const int ip = (i + 1) % mesh.nx, im = (i + mesh.nx - 1) % mesh.nx;
        out.bottom[i] = (f.bottom(ip) - 2.0 * f.bottom(i) + f.bottom(im)) * ihx2;
        out.top[i] = (f.top(ip) - 2.0 * f.top(i) + f.top(im)) * ihx2;
    }
    return out;
}

SurfaceArrays normal_derivative(const StripMesh& mesh, const BulkSurfaceField& f) {
    check_shape(mesh, f);
    SurfaceArrays out;
    out.bottom = Eigen::VectorXd::Zero(mesh.nx);
    out.top = Eigen::VectorXd::Zero(mesh.nx);
    const double c = 1.0 / (2.0 * mesh.hy);
    const int n = mesh.ny;
    for (int i = 0; i < mesh.nx; ++i) {
        // outward normal is -y at the bottom wall, +y at the top wall
        out.bottom[i] = -(-3.0 * f.at(i, 0) + 4.0 * f.at(i, 1) - f.at(i, 2)) * c;
        out.top[i] = (3.0 * f.at(i, n - 1) - 4.0 * f.at(i, n - 2) + f.at(i, n - 3)) * c;
    }
    return out;
}

double grad_sq_bulk(const StripMesh& mesh, const BulkSurfaceField& f) {
    check_shape(mesh, f);
    const int nx = mesh.nx, ny = mesh.ny;
    double s = 0.0;
    for (int j = 0; j < ny; ++j) {
        const double cx = mesh.wy(j) / mesh.hx;
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1) % nx;
            const double d = f.at(ip, j) - f.at(i, j);
            s += cx * d * d;
        }
    }
    const double cy = mesh.hx / mesh.hy;
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double d = f.at(i, j + 1) - f.at(i, j);
            s += cy * d * d;
        }
    return s;
}

double grad_sq_surface(const StripMesh& mesh, const BulkSurfaceField& f) {
    check_shape(mesh, f);
    double s = 0.0;
    const double c = 1.0 / mesh.hx;
    for (int i = 0; i < mesh.nx; ++i) {
        const int ip = (i + 1) % mesh.nx;
        const double db = f.bottom(ip) - f.bottom(i);
        const double dt = f.top(ip) - f.top(i);
        s += c * (db * db + dt * dt);
    }
    return s;
}

double stiffness_form(const StripMesh& mesh, const BulkSurfaceField& f,
                      const BulkSurfaceField& g) {
    check_shape(mesh, f);
    check_shape(mesh, g);
    const int nx = mesh.nx, ny = mesh.ny;
    double s = 0.0;
    for (int j = 0; j < ny; ++j) {
        const double cx = mesh.wy(j) / mesh.hx;
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1) % nx;
            s += cx * (f.at(ip, j) - f.at(i, j)) * (g.at(ip, j) - g.at(i, j));
        }
    }
    const double cy = mesh.hx / mesh.hy;
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i < nx; ++i)
            s += cy * (f.at(i, j + 1) - f.at(i, j)) * (g.at(i, j + 1) - g.at(i, j));
    const double cs = 1.0 / mesh.hx;
    for (int i = 0; i < nx; ++i) {
        const int ip = (i + 1) % nx;
        s += cs * (f.bottom(ip) - f.bottom(i)) * (g.bottom(ip) - g.bottom(i));
        s += cs * (f.top(ip) - f.top(i)) * (g.top(ip) - g.top(i));
    }
    return s;
}

namespace {

// Nodal loads L_k = a(f, e_k), accumulated edge by edge.
Eigen::VectorXd stiffness_loads(const StripMesh& mesh, const BulkSurfaceField& f) {
    const int nx = mesh.nx, ny = mesh.ny;
    Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.size());
    for (int j = 0; j < ny; ++j) {
        const double cx = mesh.wy(j) / mesh.hx;
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1) % nx;
            const double d = cx * (f.at(ip, j) - f.at(i, j));
            load[mesh.idx(ip, j)] += d;
            load[mesh.idx(i, j)] -= d;
        }
    }
    const double cy = mesh.hx / mesh.hy;
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double d = cy * (f.at(i, j + 1) - f.at(i, j));
            load[mesh.idx(i, j + 1)] += d;
            load[mesh.idx(i, j)] -= d;
        }
    const double cs = 1.0 / mesh.hx;
    for (int i = 0; i < nx; ++i) {
        const int ip = (i + 1) % nx;
        const double db = cs * (f.bottom(ip) - f.bottom(i));
        load[mesh.idx(ip, 0)] += db;
        load[mesh.idx(i, 0)] -= db;
        const double dt = cs * (f.top(ip) - f.top(i));
        load[mesh.idx(ip, ny - 1)] += dt;
        load[mesh.idx(i, ny - 1)] -= dt;
    }
    return load;
}

}  // namespace

DualPair stiffness_apply(const StripMesh& mesh, const BulkSurfaceField& f) {
    check_shape(mesh, f);
    const Eigen::VectorXd load = stiffness_loads(mesh, f);
    DualPair out = DualPair::zeros(mesh);
    const int nx = mesh.nx, ny = mesh.ny;
    const double ihx2 = 1.0 / (mesh.hx * mesh.hx);
    for (int j = 1; j + 1 < ny; ++j)
        for (int i = 0; i < nx; ++i)
            out.bulk_at(i, j) = load[mesh.idx(i, j)] / mesh.bulk_weight(i, j);
    // Wall rows: keep -d2/dx2 in the bulk density, put the rest (flux and
    // Laplace-Beltrami terms) in the surface density so the pairing is exact.
    for (int i = 0; i < nx; ++i) {
        const int ip = (i + 1) % nx, im = (i + nx - 1) % nx;
        const double tb = (2.0 * f.bottom(i) - f.bottom(ip) - f.bottom(im)) * ihx2;
        const double tt = (2.0 * f.top(i) - f.top(ip) - f.top(im)) * ihx2;
        out.bulk_at(i, 0) = tb;
        out.bulk_at(i, ny - 1) = tt;
        out.bottom[i] = (load[mesh.idx(i, 0)] - mesh.bulk_weight(i, 0) * tb) / mesh.surface_weight(i);
        out.top[i] = (load[mesh.idx(i, ny - 1)] - mesh.bulk_weight(i, ny - 1) * tt) / mesh.surface_weight(i);
    }
    return out;
}

Eigen::SparseMatrix<double> assemble_stiffness(const StripMesh& mesh) {
    const int nx = mesh.nx, ny = mesh.ny;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(mesh.size()) * 5);
    auto add_edge = [&](int a, int b, double c) {
        trip.emplace_back(a, a, c);
        trip.emplace_back(b, b, c);
        trip.emplace_back(a, b, -c);
        trip.emplace_back(b, a, -c);
    };
    for (int j = 0; j < ny; ++j) {
        const double cx = mesh.wy(j) / mesh.hx + (mesh.is_wall(j) ? 1.0 / mesh.hx : 0.0);
        for (int i = 0; i < nx; ++i)
            add_edge(mesh.idx(i, j), mesh.idx((i + 1) % nx, j), cx);
    }
    const double cy = mesh.hx / mesh.hy;
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i < nx; ++i)
            add_edge(mesh.idx(i, j), mesh.idx(i, j + 1), cy);
    Eigen::SparseMatrix<double> A(mesh.size(), mesh.size());
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    return A;
}

Eigen::VectorXd nodal_loads(const StripMesh& mesh, const DualPair& g) {
    check_shape(mesh, g);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.size());
    for (int j = 0; j < mesh.ny; ++j)
        for (int i = 0; i < mesh.nx; ++i)
            b[mesh.idx(i, j)] = mesh.bulk_weight(i, j) * g.bulk_at(i, j);
    for (int i = 0; i < mesh.nx; ++i) {
        b[mesh.idx(i, 0)] += mesh.surface_weight(i) * g.bottom[i];
        b[mesh.idx(i, mesh.ny - 1)] += mesh.surface_weight(i) * g.top[i];
    }
    return b;
}

Eigen::VectorXd dof_weights(const StripMesh& mesh) {
    Eigen::VectorXd w(mesh.size());
    for (int j = 0; j < mesh.ny; ++j)
        for (int i = 0; i < mesh.nx; ++i) w[mesh.idx(i, j)] = mesh.dof_weight(i, j);
    return w;
}

}  // namespace chdbc
