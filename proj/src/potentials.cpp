#include "chdbc/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chdbc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInset = 1e-8;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// logarithmic convex part and its derivative on (-1,1)
double log_beta_hat(double s) { return xlogx(1.0 + s) + xlogx(1.0 - s); }
double log_beta(double s) { return std::log1p(s) - std::log1p(-s); }
double log_beta_prime(double s) { return 2.0 / ((1.0 + s) * (1.0 - s)); }

double poly_eval(const std::vector<double>& a, double r) {
    double v = 0.0;
    for (size_t k = a.size(); k-- > 0;) v = v * r + a[k];
    return v;
}

double poly_deriv(const std::vector<double>& a, double r) {
    double v = 0.0;
    for (size_t k = a.size(); k-- > 1;) v = v * r + a[k] * static_cast<double>(k);
    return v;
}

double poly_deriv2(const std::vector<double>& a, double r) {
    double v = 0.0;
    for (size_t k = a.size(); k-- > 2;)
        v = v * r + a[k] * static_cast<double>(k) * static_cast<double>(k - 1);
    return v;
}

// Monotone scalar solve of s + eps*beta(s) = r by Newton with a bisection
// safeguard on a bracket where the residual changes sign.
template <class Beta, class BetaPrime>
double solve_resolvent(double eps, double r, double lo, double hi, Beta beta,
                       BetaPrime beta_prime) {
    auto g = [&](double s) { return s + eps * beta(s) - r; };
    double glo = g(lo), ghi = g(hi);
    if (glo >= 0.0) return lo;
    if (ghi <= 0.0) return hi;
    double s = std::clamp(r, lo, hi);
    for (int it = 0; it < 200; ++it) {
        const double gs = g(s);
        // beta_eps amplifies the resolvent error by 1/eps, so iterate down to
        // rounding level
        if (std::abs(gs) < 4e-16 * (1.0 + std::abs(r))) return s;
        if (gs > 0.0)
            hi = s;
        else
            lo = s;
        if (hi - lo < 4e-16 * (1.0 + std::abs(s))) return 0.5 * (lo + hi);
        const double slope = 1.0 + eps * beta_prime(s);
        double next = s - gs / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == s) return s;
        s = next;
    }
    return s;
}

}  // namespace

bool Interval::unbounded() const { return lo == -kInf && hi == kInf; }

bool Interval::contains(double r) const {
    if (r < lo || r > hi) return false;
    if (open_lo && r <= lo) return false;
    if (open_hi && r >= hi) return false;
    return true;
}

bool Interval::strictly_inside(double r) const { return r > lo && r < hi; }

bool Interval::subset_of(const Interval& other) const {
    const bool lo_ok = lo > other.lo || (lo == other.lo && (open_lo || !other.open_lo));
    const bool hi_ok = hi < other.hi || (hi == other.hi && (open_hi || !other.open_hi));
    return lo_ok && hi_ok;
}

PotentialSpec PotentialSpec::regular() {
    PotentialSpec p;
    p.kind_ = PotentialKind::Regular;
    p.beta_domain_ = {-kInf, kInf, false, false};
    p.pi_lipschitz_ = 1.0;
    p.f_lower_bound_ = 0.0;
    return p;
}

PotentialSpec PotentialSpec::logarithmic(double c1) {
    if (!(c1 > 1.0)) throw ConfigError("logarithmic potential requires c1 > 1");
    PotentialSpec p;
    p.kind_ = PotentialKind::Logarithmic;
    p.c1_ = c1;
    p.beta_domain_ = {-1.0, 1.0, true, true};
    p.pi_lipschitz_ = 2.0 * c1;
    // minimum of f over [-1,1], located numerically once
    double fmin = kInf;
    for (int k = 0; k <= 20000; ++k) {
        const double r = -1.0 + 2.0 * k / 20000.0;
        fmin = std::min(fmin, log_beta_hat(r) - c1 * r * r);
    }
    p.f_lower_bound_ = fmin;
    return p;
}

PotentialSpec PotentialSpec::double_obstacle(double c2) {
    if (!(c2 > 0.0)) throw ConfigError("double obstacle potential requires c2 > 0");
    PotentialSpec p;
    p.kind_ = PotentialKind::DoubleObstacle;
    p.c2_ = c2;
    p.beta_domain_ = {-1.0, 1.0, false, false};
    p.pi_lipschitz_ = 2.0 * c2;
    p.f_lower_bound_ = 0.0;
    return p;
}

PotentialSpec PotentialSpec::polynomial(std::vector<double> coeffs) {
    PotentialSpec p;
    p.kind_ = PotentialKind::Polynomial;
    p.coeffs_ = std::move(coeffs);
    p.beta_domain_ = {-kInf, kInf, false, false};
    double lip = 0.0, fmin = 0.0;
    for (int k = 0; k <= 2000; ++k) {
        const double r = -4.0 + 8.0 * k / 2000.0;
        lip = std::max(lip, std::abs(poly_deriv(p.coeffs_, r)));
        fmin = std::min(fmin, poly_eval(p.coeffs_, r));
    }
    p.pi_lipschitz_ = lip;
    p.f_lower_bound_ = fmin;
    return p;
}

std::string PotentialSpec::name() const {
    switch (kind_) {
        case PotentialKind::Regular: return "regular";
        case PotentialKind::Logarithmic: return "logarithmic";
        case PotentialKind::DoubleObstacle: return "double_obstacle";
        case PotentialKind::Polynomial: return "polynomial";
    }
    return "?";
}

double PotentialSpec::beta_hat(double r) const {
    switch (kind_) {
        case PotentialKind::Regular: return 0.25 * r * r * r * r;
        case PotentialKind::Logarithmic:
            if (std::abs(r) > 1.0) throw DomainError("logarithmic beta_hat: |r| > 1");
            return log_beta_hat(r);
        case PotentialKind::DoubleObstacle:
            if (std::abs(r) > 1.0) throw DomainError("double obstacle: |r| > 1");
            return 0.0;
        case PotentialKind::Polynomial: return 0.0;
    }
    return 0.0;
}

double PotentialSpec::pi_hat(double r) const {
    switch (kind_) {
        case PotentialKind::Regular: return 0.25 * (1.0 - 2.0 * r * r);
        case PotentialKind::Logarithmic: return -c1_ * r * r;
        case PotentialKind::DoubleObstacle: return c2_ * (1.0 - r * r);
        case PotentialKind::Polynomial: return poly_eval(coeffs_, r);
    }
    return 0.0;
}

double PotentialSpec::pi(double r) const {
    switch (kind_) {
        case PotentialKind::Regular: return -r;
        case PotentialKind::Logarithmic: return -2.0 * c1_ * r;
        case PotentialKind::DoubleObstacle: return -2.0 * c2_ * r;
        case PotentialKind::Polynomial: return poly_deriv(coeffs_, r);
    }
    return 0.0;
}

double PotentialSpec::pi_prime(double r) const {
    switch (kind_) {
        case PotentialKind::Regular: return -1.0;
        case PotentialKind::Logarithmic: return -2.0 * c1_;
        case PotentialKind::DoubleObstacle: return -2.0 * c2_;
        case PotentialKind::Polynomial: return poly_deriv2(coeffs_, r);
    }
    return 0.0;
}

double PotentialSpec::f(double r) const { return beta_hat(r) + pi_hat(r); }

double PotentialSpec::beta_min(double r) const {
    if (!beta_domain_.contains(r))
        throw DomainError(name() + " potential: r = " + std::to_string(r) +
                          " outside D(beta)");
    switch (kind_) {
        case PotentialKind::Regular: return r * r * r;
        case PotentialKind::Logarithmic: return log_beta(r);
        case PotentialKind::DoubleObstacle: return 0.0;  // 0 in G(r) for |r| <= 1
        case PotentialKind::Polynomial: return 0.0;
    }
    return 0.0;
}

double PotentialSpec::resolvent(double eps, double r) const {
    if (!(eps > 0.0)) throw ConfigError("Yosida parameter eps must be positive");
    switch (kind_) {
        case PotentialKind::Regular: {
            const double b = std::max(1.0, std::abs(r));
            return solve_resolvent(
                eps, r, -b, b, [](double s) { return s * s * s; },
                [](double s) { return 3.0 * s * s; });
        }
        case PotentialKind::Logarithmic: {
            const double cap = 1.0 - 1e-16;
            return solve_resolvent(eps, r, -cap, cap, log_beta, log_beta_prime);
        }
        case PotentialKind::DoubleObstacle: return std::clamp(r, -1.0, 1.0);
        case PotentialKind::Polynomial: return r;
    }
    return r;
}

double PotentialSpec::yosida(double eps, double r) const {
    return (r - resolvent(eps, r)) / eps;
}

double PotentialSpec::yosida_prime(double eps, double r) const {
    switch (kind_) {
        case PotentialKind::Regular: {
            const double s = resolvent(eps, r);
            const double jp = 1.0 / (1.0 + eps * 3.0 * s * s);
            return (1.0 - jp) / eps;
        }
        case PotentialKind::Logarithmic: {
            const double s = resolvent(eps, r);
            const double jp = 1.0 / (1.0 + eps * log_beta_prime(s));
            return (1.0 - jp) / eps;
        }
        case PotentialKind::DoubleObstacle:
            return std::abs(r) <= 1.0 ? 0.0 : 1.0 / eps;
        case PotentialKind::Polynomial: return 0.0;
    }
    return 0.0;
}

double PotentialSpec::moreau_f(double eps, double r) const {
    const double s = resolvent(eps, r);
    const double d = r - s;
    double bh = 0.0;
    switch (kind_) {
        case PotentialKind::Regular: bh = 0.25 * s * s * s * s; break;
        case PotentialKind::Logarithmic: bh = log_beta_hat(std::clamp(s, -1.0, 1.0)); break;
        case PotentialKind::DoubleObstacle: bh = 0.0; break;
        case PotentialKind::Polynomial: bh = 0.0; break;
    }
    return bh + d * d / (2.0 * eps) + pi_hat(r);
}

namespace {

// Sample grid of D(beta) clipped to [-box, box]; open endpoints inset.
std::vector<double> sample_grid(const Interval& dom, int samples, double box) {
    double lo = std::max(dom.lo, -box);
    double hi = std::min(dom.hi, box);
    if (dom.open_lo && lo == dom.lo) lo += kInset;
    if (dom.open_hi && hi == dom.hi) hi -= kInset;
    std::vector<double> grid;
    grid.reserve(samples);
    for (int k = 0; k < samples; ++k)
        grid.push_back(lo + (hi - lo) * k / static_cast<double>(samples - 1));
    return grid;
}

CompatibilityReport compat_impl(const PotentialSpec& bulk, const PotentialSpec& surface,
                                int samples, double eta, double c, bool fit_c,
                                double box) {
    if (!surface.beta_domain().subset_of(bulk.beta_domain()))
        throw DomainError("compatibility: D(beta_surface) is not included in D(beta_bulk)");
    CompatibilityReport rep;
    rep.eta = eta;
    double worst = -kInf;
    for (double r : sample_grid(surface.beta_domain(), samples, box)) {
        const double gap = std::abs(bulk.beta_min(r)) - eta * std::abs(surface.beta_min(r));
        if (gap > worst) {
            worst = gap;
            rep.witness = r;
        }
    }
    if (fit_c) {
        rep.c = std::max(0.0, worst);
        rep.satisfied = std::isfinite(rep.c);
    } else {
        rep.c = c;
        rep.satisfied = worst <= c;
    }
    return rep;
}

}  // namespace

CompatibilityReport check_compatibility(const PotentialSpec& bulk,
                                        const PotentialSpec& surface, int samples,
                                        double eta, double box) {
    return compat_impl(bulk, surface, samples, eta, 0.0, true, box);
}

CompatibilityReport verify_compatibility(const PotentialSpec& bulk,
                                         const PotentialSpec& surface, double eta,
                                         double c, int samples, double box) {
    return compat_impl(bulk, surface, samples, eta, c, false, box);
}

CoercivityConstants coercivity_constants(const PotentialSpec& spec, double m0,
                                         int samples, double box) {
    const Interval& dom = spec.beta_domain();
    if (!dom.strictly_inside(m0))
        throw DomainError("coercivity: m0 = " + std::to_string(m0) +
                          " is not interior to D(beta)");
    CoercivityConstants out;
    const double gap = std::min(m0 - dom.lo, dom.hi - m0);
    out.delta0 = std::min(0.5, 0.5 * gap);
    const std::vector<double> grid = sample_grid(dom, samples, box);
    auto gap_at = [&](double r) {
        const double b = spec.beta_min(r);
        return out.delta0 * std::abs(b) - b * (r - m0);
    };
    double c0 = 0.0, arg = grid.front();
    for (double r : grid) {
        const double g = gap_at(r);
        if (g > c0) {
            c0 = g;
            arg = r;
        }
    }
    // refine around the sampled argmax so the constant also covers points
    // between the grid samples
    if (c0 > 0.0) {
        const double step = (grid.back() - grid.front()) / (grid.size() - 1.0);
        const double lo = std::max(grid.front(), arg - step);
        const double hi = std::min(grid.back(), arg + step);
        for (int k = 0; k <= 2000; ++k)
            c0 = std::max(c0, gap_at(lo + (hi - lo) * k / 2000.0));
        c0 = c0 * (1.0 + 1e-9) + 1e-12;
    }
    out.c0 = c0;
    return out;
}

}  // namespace chdbc
