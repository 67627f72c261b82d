#include "chdbc/velocity.hpp"

#include <cmath>
#include <vector>

namespace chdbc {

VelocityField VelocityField::zero() { return VelocityField{}; }

VelocityField VelocityField::decaying_shear(double a0, double lambda, int mode_k) {
    if (!(lambda > 0.0)) throw ConfigError("decaying_shear requires lambda > 0");
    if (mode_k < 1) throw ConfigError("decaying_shear requires mode k >= 1");
    VelocityField f;
    f.kind = VelocityKind::DecayingShear;
    f.a0 = a0;
    f.lambda = lambda;
    f.mode_k = mode_k;
    return f;
}

void VelocityField::eval(double x, double y, double ly, double t, double& u1,
                         double& u2) const {
    (void)x;
    u2 = 0.0;
    switch (kind) {
        case VelocityKind::Zero: u1 = 0.0; break;
        case VelocityKind::DecayingShear:
            u1 = a0 * std::exp(-lambda * t) * std::sin(mode_k * M_PI * y / ly);
            break;
    }
}

VelocitySamples sample_velocity(const VelocityField& field, const StripMesh& mesh,
                                double t) {
    if (t < 0.0) throw ConfigError("velocity sample time must be nonnegative");
    VelocitySamples s;
    s.u1 = Eigen::VectorXd::Zero(mesh.size());
    s.u2 = Eigen::VectorXd::Zero(mesh.size());
    for (int j = 0; j < mesh.ny; ++j)
        for (int i = 0; i < mesh.nx; ++i)
            field.eval(mesh.x(i), mesh.y(j), mesh.ly, t, s.u1[mesh.idx(i, j)],
                       s.u2[mesh.idx(i, j)]);
    return s;
}

AdmissibilityReport validate_admissibility(const VelocityField& field,
                                           const StripMesh& mesh,
                                           const std::vector<double>& t_samples) {
    AdmissibilityReport rep;
    const int nx = mesh.nx, ny = mesh.ny;
    for (double t : t_samples) {
        const VelocitySamples s = sample_velocity(field, mesh, t);
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const int ip = (i + 1) % nx, im = (i + nx - 1) % nx;
                const double du1 =
                    (s.u1[mesh.idx(ip, j)] - s.u1[mesh.idx(im, j)]) / (2.0 * mesh.hx);
                double du2;
                if (j == 0)
                    du2 = (s.u2[mesh.idx(i, 1)] - s.u2[mesh.idx(i, 0)]) / mesh.hy;
                else if (j == ny - 1)
                    du2 = (s.u2[mesh.idx(i, ny - 1)] - s.u2[mesh.idx(i, ny - 2)]) / mesh.hy;
                else
                    du2 = (s.u2[mesh.idx(i, j + 1)] - s.u2[mesh.idx(i, j - 1)]) / (2.0 * mesh.hy);
                rep.max_divergence = std::max(rep.max_divergence, std::abs(du1 + du2));
            }
            if (mesh.is_wall(j))
                for (int i = 0; i < nx; ++i)
                    rep.max_normal_trace =
                        std::max(rep.max_normal_trace, std::abs(s.u2[mesh.idx(i, j)]));
        }
    }
    rep.pass = rep.max_divergence < 1e-10 && rep.max_normal_trace < 1e-10;
    return rep;
}

}  // namespace chdbc
