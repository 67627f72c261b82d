// Admissibility of the prescribed convection fields.
#include <doctest.h>

#include <cmath>
#include <vector>

#include "chdbc/velocity.hpp"

using namespace chdbc;

TEST_CASE("zero field samples and admissibility") {
    const StripMesh m = build_strip_mesh(16, 9, 1.0, 1.0);
    const VelocityField v = VelocityField::zero();
    const VelocitySamples s = sample_velocity(v, m, 3.0);
    CHECK(s.u1.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.u2.cwiseAbs().maxCoeff() == 0.0);
    const AdmissibilityReport rep = validate_admissibility(v, m, {0.0, 1.0, 10.0});
    CHECK(rep.pass);
    CHECK(rep.max_divergence == 0.0);
    CHECK(rep.max_normal_trace == 0.0);
}

TEST_CASE("decaying shear: profile values and decay") {
    const StripMesh m = build_strip_mesh(8, 9, 1.0, 1.0);
    const VelocityField v = VelocityField::decaying_shear(1.0, 0.1, 1);
    double u1, u2;
    v.eval(0.3, 0.5 * m.ly, m.ly, 0.0, u1, u2);
    CHECK(u1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u2 == 0.0);
    v.eval(0.3, 0.5 * m.ly, m.ly, 10.0 / 0.1, u1, u2);
    CHECK(u1 == doctest::Approx(std::exp(-10.0)).epsilon(1e-12));

    const AdmissibilityReport rep = validate_admissibility(v, m, {0.0, 0.5, 5.0});
    CHECK(rep.pass);
    CHECK(rep.max_divergence < 1e-12);
    CHECK(rep.max_normal_trace == 0.0);

    CHECK_THROWS_AS(sample_velocity(v, m, -1.0), ConfigError);
    CHECK_THROWS_AS(VelocityField::decaying_shear(1.0, 0.0), ConfigError);
}

TEST_CASE("manufactured non-solenoidal field fails") {
    // u = (x, 0) has unit divergence away from the periodic seam
    const StripMesh m = build_strip_mesh(16, 5, 1.0, 1.0);
    VelocitySamples s;
    s.u1.resize(m.size());
    s.u2 = Eigen::VectorXd::Zero(m.size());
    for (int j = 0; j < m.ny; ++j)
        for (int i = 0; i < m.nx; ++i) s.u1[m.idx(i, j)] = m.x(i);
    double max_div = 0.0;
    for (int j = 0; j < m.ny; ++j)
        for (int i = 1; i + 1 < m.nx; ++i) {
            const double d =
                (s.u1[m.idx(i + 1, j)] - s.u1[m.idx(i - 1, j)]) / (2.0 * m.hx);
            max_div = std::max(max_div, std::abs(d));
        }
    CHECK(max_div == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_div > 1e-10);  // fails the admissibility threshold
}

TEST_CASE("finite decay integral matches the closed form") {
    const StripMesh m = build_strip_mesh(16, 33, 1.0, 1.0);
    const double a0 = 1.0, lambda = 0.25;
    const VelocityField v = VelocityField::decaying_shear(a0, lambda, 1);

    // int_0^T |u(t)|^2_{L2(Omega)} dt by trapezoid sampling vs
    // a0^2 * (int sin^2) * (1 - exp(-2 lambda T)) / (2 lambda)
    const double T = 20.0;
    const int nt = 4000;
    const double dt = T / nt;
    double quad = 0.0;
    for (int k = 0; k <= nt; ++k) {
        const double t = k * dt;
        const VelocitySamples s = sample_velocity(v, m, t);
        double norm2 = 0.0;
        for (int j = 0; j < m.ny; ++j)
            for (int i = 0; i < m.nx; ++i) {
                const double val = s.u1[m.idx(i, j)];
                norm2 += m.bulk_weight(i, j) * val * val;
            }
        quad += (k == 0 || k == nt ? 0.5 : 1.0) * dt * norm2;
    }
    double space = 0.0;  // quadrature of sin^2(pi y / ly) over the strip
    for (int j = 0; j < m.ny; ++j) {
        const double sv = std::sin(M_PI * m.y(j) / m.ly);
        space += m.hx * m.nx * m.wy(j) * sv * sv;
    }
    const double total = a0 * a0 * space / (2.0 * lambda);
    const double truncated = total * (1.0 - std::exp(-2.0 * lambda * T));
    CHECK(quad == doctest::Approx(truncated).epsilon(1e-4));
    // truncation error beyond the horizon is exp(-2 lambda T) of the total
    CHECK(total - truncated <= std::exp(-2.0 * lambda * T) * total * (1.0 + 1e-12));
}
