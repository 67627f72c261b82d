// Potential families, Yosida regularization properties, compatibility and
// coercivity constants.
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "chdbc/potentials.hpp"

using namespace chdbc;

namespace {

const std::vector<double> kEps = {1e-1, 1e-2, 1e-3};

// independent scalar solve of s + eps*s^3 = r by plain bisection
double cubic_resolvent_oracle(double eps, double r) {
    double lo = std::min(0.0, r), hi = std::max(0.0, r);
    for (int it = 0; it < 200; ++it) {
        const double s = 0.5 * (lo + hi);
        if (s + eps * s * s * s < r)
            lo = s;
        else
            hi = s;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = a + (b - a) * k / (n - 1.0);
    return v;
}

}  // namespace

TEST_CASE("tabulated potential values") {
    const PotentialSpec reg = PotentialSpec::regular();
    CHECK(reg.f(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(reg.f(-1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(reg.f(0.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(reg.beta_min(0.5) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(reg.pi(0.5) == doctest::Approx(-0.5).epsilon(1e-15));

    const PotentialSpec log2 = PotentialSpec::logarithmic(2.0);
    CHECK(log2.f(0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(log2.beta_min(0.0) == doctest::Approx(0.0).epsilon(1e-15));
    // f_log(1/2) = (3/2)ln(3/2) + (1/2)ln(1/2) - c1/4
    CHECK(log2.f(0.5) ==
          doctest::Approx(1.5 * std::log(1.5) + 0.5 * std::log(0.5) - 0.5).epsilon(1e-14));
    CHECK_THROWS_AS(PotentialSpec::logarithmic(1.0), ConfigError);

    const PotentialSpec obs = PotentialSpec::double_obstacle(1.0);
    CHECK(obs.f(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(obs.f(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(obs.f(1.5), DomainError);
    for (double r : linspace(-1.0, 1.0, 101))
        CHECK(obs.beta_min(r) == 0.0);
    CHECK_THROWS_AS(obs.beta_min(1.0001), DomainError);

    const PotentialSpec zero = PotentialSpec::polynomial({});
    CHECK(zero.f(0.3) == 0.0);
    CHECK(zero.beta_min(0.3) == 0.0);
    const PotentialSpec cubic = PotentialSpec::polynomial({0.0, 0.0, 0.0, 1.0});
    CHECK(cubic.pi(2.0) == doctest::Approx(12.0));
    CHECK(cubic.pi_prime(2.0) == doctest::Approx(12.0));
}

TEST_CASE("Yosida regularization vanishes at the origin") {
    for (double eps : kEps) {
        CHECK(PotentialSpec::regular().yosida(eps, 0.0) == doctest::Approx(0.0));
        CHECK(PotentialSpec::logarithmic(2.0).yosida(eps, 0.0) == doctest::Approx(0.0));
        CHECK(PotentialSpec::double_obstacle(1.0).yosida(eps, 0.0) == doctest::Approx(0.0));
    }
    CHECK_THROWS_AS(PotentialSpec::regular().resolvent(0.0, 1.0), ConfigError);
}

TEST_CASE("double obstacle closed form") {
    const PotentialSpec obs = PotentialSpec::double_obstacle(1.0);
    for (double eps : kEps)
        for (double r : linspace(-3.0, 3.0, 301)) {
            const double expect = r > 1.0 ? (r - 1.0) / eps : (r < -1.0 ? (r + 1.0) / eps : 0.0);
            CHECK(obs.yosida(eps, r) == doctest::Approx(expect).epsilon(1e-13));
        }
}

TEST_CASE("cubic Yosida against the scalar bisection oracle") {
    const PotentialSpec reg = PotentialSpec::regular();
    for (double eps : kEps)
        for (double r : linspace(-2.0, 2.0, 41)) {
            const double s = cubic_resolvent_oracle(eps, r);
            CHECK(reg.yosida(eps, r) == doctest::Approx((r - s) / eps).epsilon(1e-10));
        }
    // |beta_eps| <= |beta| and convergence to r^3 at r = 0.5
    const double b = 0.125;
    double prev_gap = 1.0;
    for (double eps : kEps) {
        const double y = reg.yosida(eps, 0.5);
        CHECK(std::abs(y) <= b + 1e-14);
        const double gap = std::abs(y - b);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 2e-4);
}

TEST_CASE("monotonicity and 1/eps contraction of the Yosida map") {
    std::vector<PotentialSpec> specs = {PotentialSpec::regular(),
                                        PotentialSpec::logarithmic(2.0),
                                        PotentialSpec::double_obstacle(1.0)};
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> dist(-2.5, 2.5);
    for (const auto& spec : specs)
        for (double eps : kEps)
            for (int rep = 0; rep < 300; ++rep) {
                const double a = dist(rng), b = dist(rng);
                const double ya = spec.yosida(eps, a), yb = spec.yosida(eps, b);
                CHECK((ya - yb) * (a - b) >= -1e-12);
                CHECK(std::abs(ya - yb) <= std::abs(a - b) / eps * (1.0 + 1e-10) + 1e-12);
            }
}

TEST_CASE("dominated monotone limit toward the minimal selection") {
    std::vector<PotentialSpec> specs = {PotentialSpec::regular(),
                                        PotentialSpec::logarithmic(2.0),
                                        PotentialSpec::double_obstacle(1.0)};
    for (const auto& spec : specs) {
        const Interval& dom = spec.beta_domain();
        const double lo = std::max(dom.lo, -2.0) + (dom.open_lo ? 1e-3 : 0.0);
        const double hi = std::min(dom.hi, 2.0) - (dom.open_hi ? 1e-3 : 0.0);
        for (double r : linspace(lo, hi, 101)) {
            const double b = spec.beta_min(r);
            double prev = 0.0;
            bool first = true;
            for (double eps : kEps) {
                const double y = spec.yosida(eps, r);
                CHECK(std::abs(y) <= std::abs(b) + 1e-12);
                if (!first) CHECK(std::abs(y) >= std::abs(prev) - 1e-12);
                prev = y;
                first = false;
            }
        }
    }
}

TEST_CASE("split consistency: d(beta_hat + pi_hat) matches beta_min + pi") {
    const double h = 1e-6;
    auto check_split = [&](const PotentialSpec& spec, double lo, double hi) {
        for (double r : linspace(lo, hi, 41)) {
            const double fd = (spec.f(r + h) - spec.f(r - h)) / (2.0 * h);
            CHECK(fd == doctest::Approx(spec.beta_min(r) + spec.pi(r)).epsilon(1e-6));
        }
    };
    check_split(PotentialSpec::regular(), -2.0, 2.0);
    check_split(PotentialSpec::logarithmic(2.0), -0.9, 0.9);
    check_split(PotentialSpec::double_obstacle(1.0), -0.99, 0.99);
}

TEST_CASE("f is bounded below by the stored bound") {
    std::vector<PotentialSpec> specs = {PotentialSpec::regular(),
                                        PotentialSpec::logarithmic(2.0),
                                        PotentialSpec::double_obstacle(1.0)};
    for (const auto& spec : specs) {
        const Interval& dom = spec.beta_domain();
        const double lo = std::max(dom.lo, -3.0);
        const double hi = std::min(dom.hi, 3.0);
        for (double r : linspace(lo, hi, 2001))
            CHECK(spec.f(r) >= spec.f_lower_bound() - 1e-12);
    }
}

TEST_CASE("Yosida derivative matches finite differences") {
    std::vector<PotentialSpec> specs = {PotentialSpec::regular(),
                                        PotentialSpec::logarithmic(2.0)};
    const double h = 1e-6;
    for (const auto& spec : specs)
        for (double eps : {1e-1, 1e-2})
            for (double r : linspace(-1.5, 1.5, 31)) {
                const double fd = (spec.yosida(eps, r + h) - spec.yosida(eps, r - h)) / (2.0 * h);
                CHECK(spec.yosida_prime(eps, r) == doctest::Approx(fd).epsilon(1e-4));
            }
}

TEST_CASE("Moreau envelope: below f, derivative is the Yosida map") {
    std::vector<PotentialSpec> specs = {PotentialSpec::regular(),
                                        PotentialSpec::logarithmic(2.0),
                                        PotentialSpec::double_obstacle(1.0)};
    const double h = 1e-6;
    for (const auto& spec : specs)
        for (double eps : {1e-1, 1e-2}) {
            const Interval& dom = spec.beta_domain();
            const double lo = std::max(dom.lo, -2.0) + 1e-3;
            const double hi = std::min(dom.hi, 2.0) - 1e-3;
            for (double r : linspace(lo, hi, 41)) {
                CHECK(spec.moreau_f(eps, r) <= spec.f(r) + 1e-12);
                const double fd =
                    (spec.moreau_f(eps, r + h) - spec.moreau_f(eps, r - h)) / (2.0 * h);
                CHECK(fd == doctest::Approx(spec.yosida(eps, r) + spec.pi(r)).epsilon(1e-4));
            }
            // envelope is defined beyond the domain and stays finite
            CHECK(std::isfinite(spec.moreau_f(eps, 5.0)));
        }
}

TEST_CASE("compatibility of bulk and surface potentials") {
    const PotentialSpec reg = PotentialSpec::regular();
    const PotentialSpec log2 = PotentialSpec::logarithmic(2.0);

    const CompatibilityReport same = check_compatibility(reg, reg);
    CHECK(same.satisfied);
    CHECK(same.eta == doctest::Approx(1.0));
    CHECK(same.c <= 1e-12);

    const CompatibilityReport mixed = check_compatibility(reg, log2);
    CHECK(mixed.satisfied);
    CHECK(mixed.c <= 1.0);  // |r^3| <= 1 on [-1,1]

    CHECK_THROWS_AS(check_compatibility(log2, reg), DomainError);

    const CompatibilityReport supplied = verify_compatibility(reg, log2, 1.0, 1.0);
    CHECK(supplied.satisfied);
    const CompatibilityReport tight = verify_compatibility(reg, reg, 0.5, 0.0);
    CHECK_FALSE(tight.satisfied);  // |b| <= 0.5|b| fails wherever b != 0
}

TEST_CASE("coercivity constants") {
    const CoercivityConstants reg = coercivity_constants(PotentialSpec::regular(), 0.0);
    CHECK(reg.delta0 == doctest::Approx(0.5));
    CHECK(reg.c0 <= 0.106);
    // sampled verification of the bound itself
    const PotentialSpec spec = PotentialSpec::regular();
    for (double r : linspace(-3.0, 3.0, 2001)) {
        const double b = spec.beta_min(r);
        CHECK(b * (r - 0.0) >= reg.delta0 * std::abs(b) - reg.c0 - 1e-12);
    }

    const CoercivityConstants obs =
        coercivity_constants(PotentialSpec::double_obstacle(1.0), 0.0);
    CHECK(obs.delta0 == doctest::Approx(0.5));
    CHECK(obs.c0 == doctest::Approx(0.0));

    CHECK_THROWS_AS(coercivity_constants(PotentialSpec::double_obstacle(1.0), 1.5),
                    DomainError);
    CHECK_THROWS_AS(coercivity_constants(PotentialSpec::double_obstacle(1.0), 1.0),
                    DomainError);
}
