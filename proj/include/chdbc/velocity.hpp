// Prescribed convection fields: divergence free, tangential at the walls,
// with exponentially decaying amplitude.
#pragma once

#include <Eigen/Dense>

#include "chdbc/mesh.hpp"

namespace chdbc {

enum class VelocityKind { Zero, DecayingShear };

// Built-ins:
//   zero            u = 0
//   decaying_shear  u1(x,y,t) = a0 exp(-lambda t) sin(k pi y / ly),  u2 = 0
// The shear is x-independent with u2 = 0, so its discrete divergence and
// normal trace vanish identically.
struct VelocityField {
    VelocityKind kind = VelocityKind::Zero;
    double a0 = 0.0;
    double lambda = 0.0;
    int mode_k = 1;

    static VelocityField zero();
    static VelocityField decaying_shear(double a0, double lambda, int mode_k = 1);

    // pointwise evaluation, t >= 0
    void eval(double x, double y, double ly, double t, double& u1, double& u2) const;
};

struct VelocitySamples {
    Eigen::VectorXd u1, u2;  // node samples, size nx*ny, index j*nx + i
};

VelocitySamples sample_velocity(const VelocityField& field, const StripMesh& mesh,
                                double t);

struct AdmissibilityReport {
    double max_divergence = 0.0;
    double max_normal_trace = 0.0;
    bool pass = false;
};

// Max discrete divergence over all nodes and times, and max |u.nu| over the
// wall nodes; pass requires both below 1e-10.
AdmissibilityReport validate_admissibility(const VelocityField& field,
                                           const StripMesh& mesh,
                                           const std::vector<double>& t_samples);

}  // namespace chdbc
