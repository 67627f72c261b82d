// Double-well potentials split as a convex part plus a smooth perturbation,
// f = beta_hat + pi_hat, with the monotone graph beta = d(beta_hat), its
// minimal-modulus selection beta_min, and the Yosida regularization
//   beta_eps(r) = (r - J_eps(r)) / eps,   J_eps = (I + eps*beta)^{-1}.
//
// Built-in families:
//   regular          f(r) = (r^2-1)^2/4        beta_hat = r^4/4, pi_hat = (1-2r^2)/4
//   logarithmic(c1)  f(r) = (1+r)ln(1+r)+(1-r)ln(1-r) - c1 r^2 on [-1,1]
//                    beta_hat = the logarithmic part, pi_hat = -c1 r^2
//   double_obstacle(c2)  f(r) = c2 (1-r^2) on [-1,1], +inf outside
//                    beta_hat = indicator of [-1,1], pi_hat = c2 (1-r^2)
//   polynomial(a)    beta_hat = 0, pi_hat = sum a_k r^k  (testing hook)
#pragma once

#include <string>
#include <vector>

#include "chdbc/errors.hpp"

namespace chdbc {

struct Interval {
    double lo = 0.0, hi = 0.0;
    bool open_lo = false, open_hi = false;
    bool unbounded() const;
    // r is admissible for evaluating the graph selection
    bool contains(double r) const;
    bool strictly_inside(double r) const;
    bool subset_of(const Interval& other) const;
};

enum class PotentialKind { Regular, Logarithmic, DoubleObstacle, Polynomial };

class PotentialSpec {
  public:
    static PotentialSpec regular();
    static PotentialSpec logarithmic(double c1);
    static PotentialSpec double_obstacle(double c2);
    static PotentialSpec polynomial(std::vector<double> coeffs);

    PotentialKind kind() const { return kind_; }
    std::string name() const;

    // f = beta_hat + pi_hat; throws DomainError where f is +inf
    double f(double r) const;
    double beta_hat(double r) const;
    double pi_hat(double r) const;
    double pi(double r) const;
    double pi_prime(double r) const;

    // minimal-modulus selection of the subdifferential; throws DomainError
    // outside D(beta)
    double beta_min(double r) const;

    // Yosida machinery; globally defined for every real r and eps > 0
    double resolvent(double eps, double r) const;
    double yosida(double eps, double r) const;
    double yosida_prime(double eps, double r) const;
    // Moreau envelope of beta_hat plus pi_hat (the regularized potential
    // entering the energy)
    double moreau_f(double eps, double r) const;

    double pi_lipschitz() const { return pi_lipschitz_; }
    double f_lower_bound() const { return f_lower_bound_; }
    const Interval& beta_domain() const { return beta_domain_; }

  private:
    PotentialSpec() = default;

    PotentialKind kind_ = PotentialKind::Regular;
    double c1_ = 0.0;
    double c2_ = 0.0;
    std::vector<double> coeffs_;
    Interval beta_domain_;
    double pi_lipschitz_ = 0.0;
    double f_lower_bound_ = 0.0;
};

// Compatibility of the bulk/surface pair: D(beta_surf) must be included in
// D(beta_bulk) and |beta_bulk°(r)| <= eta |beta_surf°(r)| + C on D(beta_surf).
struct CompatibilityReport {
    double eta = 1.0;
    double c = 0.0;
    bool satisfied = false;
    double witness = 0.0;  // sample with the largest residual of the bound
};

// Fits C for the given eta (default 1) over a sample grid of D(beta_surf)
// intersected with [-box, box]; open endpoints are inset by 1e-8.
// Throws DomainError when the domain inclusion fails.
CompatibilityReport check_compatibility(const PotentialSpec& bulk,
                                        const PotentialSpec& surface,
                                        int samples = 10000, double eta = 1.0,
                                        double box = 3.0);

// Verifies a supplied (eta, C) pair on the sample grid.
CompatibilityReport verify_compatibility(const PotentialSpec& bulk,
                                         const PotentialSpec& surface, double eta,
                                         double c, int samples = 10000,
                                         double box = 3.0);

// Constants of the coercivity bound beta(r)(r - m0) >= delta0 |beta(r)| - C0,
// sampled over D(beta) intersected with [-box, box]. Requires m0 strictly
// interior to D(beta).
struct CoercivityConstants {
    double delta0 = 0.0;
    double c0 = 0.0;
};

CoercivityConstants coercivity_constants(const PotentialSpec& spec, double m0,
                                         int samples = 10000, double box = 3.0);

}  // namespace chdbc
