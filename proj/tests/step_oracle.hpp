// Test-only brute-force reference for one implicit step: independent
// residual assembly (dense stiffness by edge sums, own quadrature weights,
// own scalar resolvent solves), finite-difference Jacobian, dense LU Newton
// to a 1e-12 residual. Deliberately kept free of the production solver path.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "chdbc/mesh.hpp"
#include "chdbc/velocity.hpp"

namespace oracle {

using chdbc::StripMesh;

struct ScalarPotential {
    std::function<double(double)> beta_eps;  // Yosida map
    std::function<double(double)> pi;
};

inline ScalarPotential cubic_potential(double eps) {
    return {[eps](double r) {
                double lo = std::min(0.0, r), hi = std::max(0.0, r);
                for (int it = 0; it < 200; ++it) {
                    const double s = 0.5 * (lo + hi);
                    (s + eps * s * s * s < r ? lo : hi) = s;
                }
                return (r - 0.5 * (lo + hi)) / eps;
            },
            [](double r) { return -r; }};
}

inline ScalarPotential log_potential(double eps, double c1) {
    return {[eps](double r) {
                double lo = -1.0 + 1e-15, hi = 1.0 - 1e-15;
                for (int it = 0; it < 200; ++it) {
                    const double s = 0.5 * (lo + hi);
                    (s + eps * (std::log(1.0 + s) - std::log(1.0 - s)) < r ? lo : hi) = s;
                }
                return (r - 0.5 * (lo + hi)) / eps;
            },
            [c1](double r) { return -2.0 * c1 * r; }};
}

inline ScalarPotential obstacle_potential(double eps, double c2) {
    return {[eps](double r) {
                if (r > 1.0) return (r - 1.0) / eps;
                if (r < -1.0) return (r + 1.0) / eps;
                return 0.0;
            },
            [c2](double r) { return -2.0 * c2 * r; }};
}

inline Eigen::MatrixXd dense_stiffness(const StripMesh& m) {
    const int n = m.size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    auto edge = [&](int a, int b, double c) {
        A(a, a) += c;
        A(b, b) += c;
        A(a, b) -= c;
        A(b, a) -= c;
    };
    for (int j = 0; j < m.ny; ++j)
        for (int i = 0; i < m.nx; ++i) {
            double c = (j == 0 || j == m.ny - 1 ? 0.5 : 1.0) * m.hy / m.hx;
            if (j == 0 || j == m.ny - 1) c += 1.0 / m.hx;
            edge(m.idx(i, j), m.idx((i + 1) % m.nx, j), c);
        }
    for (int j = 0; j + 1 < m.ny; ++j)
        for (int i = 0; i < m.nx; ++i) edge(m.idx(i, j), m.idx(i, j + 1), m.hx / m.hy);
    return A;
}

struct StepProblem {
    const StripMesh& m;
    double tau_omega, tau_gamma, dt, t_old;
    ScalarPotential bulk, surface;
    const chdbc::VelocityField& vel;
    Eigen::VectorXd rho_old;

    Eigen::VectorXd weights_bulk() const {
        Eigen::VectorXd w(m.size());
        for (int j = 0; j < m.ny; ++j)
            for (int i = 0; i < m.nx; ++i)
                w[m.idx(i, j)] = m.hx * ((j == 0 || j == m.ny - 1) ? 0.5 * m.hy : m.hy);
        return w;
    }
    Eigen::VectorXd weights_surf() const {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(m.size());
        for (int i = 0; i < m.nx; ++i) {
            w[m.idx(i, 0)] = m.hx;
            w[m.idx(i, m.ny - 1)] = m.hx;
        }
        return w;
    }

    Eigen::VectorXd convection() const {
        Eigen::VectorXd load = Eigen::VectorXd::Zero(m.size());
        double u1, u2;
        for (int j = 0; j < m.ny; ++j)
            for (int i = 0; i < m.nx; ++i) {
                const int ip = (i + 1) % m.nx;
                vel.eval(m.x(i) + 0.5 * m.hx, m.y(j), m.ly, t_old, u1, u2);
                const double wy = (j == 0 || j == m.ny - 1) ? 0.5 * m.hy : m.hy;
                const double flux =
                    wy * 0.5 * (rho_old[m.idx(i, j)] + rho_old[m.idx(ip, j)]) * u1;
                load[m.idx(ip, j)] += flux;
                load[m.idx(i, j)] -= flux;
            }
        for (int j = 0; j + 1 < m.ny; ++j)
            for (int i = 0; i < m.nx; ++i) {
                vel.eval(m.x(i), m.y(j) + 0.5 * m.hy, m.ly, t_old, u1, u2);
                const double flux =
                    m.hx * 0.5 * (rho_old[m.idx(i, j)] + rho_old[m.idx(i, j + 1)]) * u2;
                load[m.idx(i, j + 1)] += flux;
                load[m.idx(i, j)] -= flux;
            }
        return load;
    }

    // x = [rho; mu]
    Eigen::VectorXd residual(const Eigen::VectorXd& x) const {
        const int n = m.size();
        const Eigen::MatrixXd A = dense_stiffness(m);
        const Eigen::VectorXd wb = weights_bulk(), ws = weights_surf();
        const Eigen::VectorXd w = wb + ws;
        const Eigen::VectorXd conv = convection();
        const Eigen::VectorXd rho = x.head(n), mu = x.tail(n);
        Eigen::VectorXd r(2 * n);
        r.head(n) = w.cwiseProduct(rho - rho_old) / dt - conv + A * mu;
        Eigen::VectorXd chi(n);
        for (int k = 0; k < n; ++k) {
            chi[k] = wb[k] * (bulk.beta_eps(rho[k]) + bulk.pi(rho[k]));
            if (ws[k] != 0.0)
                chi[k] += ws[k] * (surface.beta_eps(rho[k]) + surface.pi(rho[k]));
        }
        r.tail(n) = (tau_omega * wb + tau_gamma * ws).cwiseProduct(rho - rho_old) / dt +
                    A * rho + chi - w.cwiseProduct(mu);
        return r;
    }

    // dense Newton with a finite-difference Jacobian
    Eigen::VectorXd solve() const {
        const int n = m.size();
        Eigen::VectorXd x(2 * n);
        x.head(n) = rho_old;
        x.tail(n).setZero();
        Eigen::VectorXd r = residual(x);
        for (int it = 0; it < 80; ++it) {
            if (r.cwiseAbs().maxCoeff() < 1e-12) break;
            Eigen::MatrixXd J(2 * n, 2 * n);
            for (int c = 0; c < 2 * n; ++c) {
                const double h = 1e-7 * std::max(1.0, std::abs(x[c]));
                Eigen::VectorXd xp = x, xm = x;
                xp[c] += h;
                xm[c] -= h;
                J.col(c) = (residual(xp) - residual(xm)) / (2.0 * h);
            }
            const Eigen::VectorXd dx = J.partialPivLu().solve(-r);
            double alpha = 1.0;
            const double n0 = r.norm();
            for (int ls = 0; ls < 60; ++ls) {
                Eigen::VectorXd xt = x + alpha * dx;
                Eigen::VectorXd rt = residual(xt);
                if (rt.norm() < n0) {
                    x = xt;
                    r = rt;
                    break;
                }
                alpha *= 0.5;
            }
        }
        return x;
    }
};

}  // namespace oracle
