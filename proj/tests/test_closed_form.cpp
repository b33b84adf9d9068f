#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fracstar/closed_form.hpp"
#include "fracstar/errors.hpp"
#include "fracstar/specfun.hpp"
#include "test_util.hpp"

using namespace fracstar;

namespace {

double rel_diff(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// The reference bond used across the spec examples:
// beta = 1, m = 1/3, lambda = 2, alpha = 1.5 => p = 3.75, gamma* = 2.25.
const BondSpec kReferenceBond{1.0, 1.0, 1.0 / 3.0, 2.0, {}, {}};
constexpr double kReferenceAlpha = 1.5;

// Forced bond with the planted root A = 1: b = Gamma(p+1)/Gamma(gamma*+1) - lambda.
BondSpec planted_bond(const BondSpec& base, double alpha) {
    BondSpec bond = base;
    const double p = solution_exponent(bond, alpha);
    const double gs = gamma_star(bond, alpha);
    bond.forcing_b = gamma_ratio(p + 1.0, gs + 1.0) - bond.lam;
    bond.forcing_nu = gs;
    return bond;
}

// Brute-force oracle: dense 10^6-point log scan plus bisection.
std::vector<double> dense_scan_roots(const BondSpec& bond, double alpha, double lo, double hi) {
    const int points = 1000000;
    const double log_lo = std::log(lo);
    const double log_step = (std::log(hi) - log_lo) / points;
    std::vector<double> roots;
    double prev_x = lo;
    double prev_f = treq_residual(prev_x, bond, alpha);
    for (int i = 1; i <= points; ++i) {
        const double x = std::exp(log_lo + i * log_step);
        const double fx = treq_residual(x, bond, alpha);
        if ((prev_f < 0.0) != (fx < 0.0)) {
            double a = prev_x, b = x, fa = prev_f;
            for (int iter = 0; iter < 200; ++iter) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                const double fm = treq_residual(mid, bond, alpha);
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = fx;
    }
    return roots;
}

}  // namespace

TEST_CASE("real_power branch rules") {
    CHECK(real_power(2.0, 0.5) == doctest::Approx(std::sqrt(2.0)));
    CHECK(real_power(-2.0, 3.0) == doctest::Approx(-8.0));
    CHECK(real_power(-2.0, 2.0) == doctest::Approx(4.0));
    CHECK(real_power(0.0, 1.5) == 0.0);
    CHECK(real_power(0.0, 0.0) == 1.0);
    CHECK_THROWS_AS(real_power(-2.0, 0.5), BranchError);
    CHECK_THROWS_AS(real_power(0.0, -1.0), BranchError);
}

TEST_CASE("amplitude_homogeneous reference values") {
    // m = 0 reduces the equation to D^alpha y = lambda x^beta
    const BondSpec linear{1.0, 0.0, 0.0, 1.0, {}, {}};
    CHECK(rel_diff(amplitude_homogeneous(linear, 1.5), 0.752252778063675) < 1e-12);

    CHECK(rel_diff(amplitude_homogeneous(kReferenceBond, kReferenceAlpha),
                   0.17042951655628777) < 1e-12);
}

TEST_CASE("amplitude_homogeneous branch and pole failures") {
    BondSpec negative = kReferenceBond;
    negative.lam = -2.0;  // base < 0, exponent -3/2
    CHECK_THROWS_AS(amplitude_homogeneous(negative, kReferenceAlpha), BranchError);

    BondSpec m_one = kReferenceBond;
    m_one.m = 1.0;
    CHECK_THROWS_AS(amplitude_homogeneous(m_one, kReferenceAlpha), DomainError);

    // gamma*+1 = 0 must be reported as a pole, not silently zeroed
    const BondSpec pole{1.0, 0.0, -2.0, 1.0, {}, {}};  // gamma* = (0 - 3)/3 = -1
    CHECK_THROWS_AS(amplitude_homogeneous(pole, 1.5), PoleError);
}

TEST_CASE("amplitude_homogeneous negative base with integer exponent") {
    // m = 2: 1/(m-1) = 1, so a negative base is legal and carries its sign
    const BondSpec bond{1.0, -3.0, 2.0, -1.0, {}, {}};  // p = 1.5, gamma* = 0
    const double a = amplitude_homogeneous(bond, 1.5);
    CHECK(rel_diff(a, -1.3293403881791372) < 1e-12);  // Gamma(2.5)/lambda

    // consistency: D^1.5 (A x^1.5) = A Gamma(2.5) must equal lambda x^{-3} (A x^1.5)^2 = -A^2
    CHECK(rel_diff(a * fracstar::gamma(2.5), -a * a) < 1e-12);
}

TEST_CASE("treq_residual planted root and reductions") {
    std::mt19937 rng(20240831);
    for (int i = 0; i < 100; ++i) {
        testutil::Draw d = testutil::draw_admissible_forced(rng);
        const BondSpec bond = planted_bond(d.bond, d.alpha);
        const double scale = std::max(1.0, std::fabs(*bond.forcing_b));
        CHECK(std::fabs(treq_residual(1.0, bond, d.alpha)) <= 1e-10 * scale);
    }

    // b = 0 collapses the transcendental equation onto the homogeneous amplitude
    for (int i = 0; i < 100; ++i) {
        testutil::Draw d = testutil::draw_admissible(rng);
        const double a_hom = amplitude_homogeneous(d.bond, d.alpha);
        if (a_hom < 0.0) continue;
        const double p = solution_exponent(d.bond, d.alpha);
        const double scale = std::max(1.0, fracstar::gamma(p + 1.0) * a_hom);
        CHECK(std::fabs(treq_residual(a_hom, d.bond, d.alpha)) <= 1e-10 * scale);
    }
}

TEST_CASE("treq_residual at zero amplitude and domain guard") {
    BondSpec bond = kReferenceBond;
    bond.forcing_b = 1.0;
    bond.forcing_nu = 2.25;
    const double at_zero = treq_residual(0.0, bond, kReferenceAlpha);
    CHECK(at_zero == doctest::Approx(fracstar::gamma(3.25)).epsilon(1e-13));
    CHECK(at_zero > 0.0);
    CHECK_THROWS_AS(treq_residual(-0.5, bond, kReferenceAlpha), DomainError);
}

TEST_CASE("amplitude_forced recovers the planted root") {
    std::mt19937 rng(20240832);
    for (int i = 0; i < 50; ++i) {
        testutil::Draw d = testutil::draw_admissible_forced(rng);
        const BondSpec bond = planted_bond(d.bond, d.alpha);
        const std::vector<double> roots = amplitude_forced(bond, d.alpha);
        REQUIRE(!roots.empty());
        double best = 1e300;
        for (double r : roots) best = std::min(best, std::fabs(r - 1.0));
        CHECK(best <= 1e-10);
    }
}

TEST_CASE("amplitude_forced tends to the homogeneous amplitude as b -> 0") {
    std::mt19937 rng(20240833);
    for (int i = 0; i < 100; ++i) {
        testutil::Draw d = testutil::draw_admissible_forced(rng);
        BondSpec bond = d.bond;
        bond.forcing_b = 1e-12;
        const double a_hom = amplitude_homogeneous(bond, d.alpha);
        const std::vector<double> roots = amplitude_forced(bond, d.alpha);
        REQUIRE(!roots.empty());
        double best = 1e300;
        for (double r : roots) best = std::min(best, std::fabs(r - a_hom));
        CHECK(best / a_hom <= 1e-6);
    }
}

TEST_CASE("amplitude_forced tabulated root against the dense-scan oracle") {
    BondSpec bond = kReferenceBond;  // lambda = 2
    bond.forcing_b = 1.0;
    bond.forcing_nu = 2.25;

    const std::vector<double> roots = amplitude_forced(bond, kReferenceAlpha);
    REQUIRE(roots.size() == 1);
    CHECK(rel_diff(roots[0], 0.37545754949040244) < 1e-9);  // frozen dense-scan value

    const std::vector<double> oracle_roots =
        dense_scan_roots(bond, kReferenceAlpha, 1e-8, 1e8);
    REQUIRE(oracle_roots.size() == 1);
    CHECK(rel_diff(roots[0], oracle_roots[0]) < 1e-9);
}

TEST_CASE("amplitude_forced returns multiple roots ascending when they exist") {
    // lambda > Gamma(p+1)/Gamma(gamma*+1) makes the planted b negative; the
    // concave residual then crosses zero twice, with A = 1 the upper root.
    BondSpec bond = kReferenceBond;
    bond.lam = 8.0;
    bond.forcing_b = gamma_ratio(4.75, 3.25) - bond.lam;
    bond.forcing_nu = 2.25;
    REQUIRE(*bond.forcing_b < 0.0);

    const std::vector<double> roots = amplitude_forced(bond, kReferenceAlpha);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] < roots[1]);
    CHECK(std::fabs(roots[1] - 1.0) <= 1e-10);
    const double scale = std::max(1.0, std::fabs(fracstar::gamma(3.25) * *bond.forcing_b));
    CHECK(std::fabs(treq_residual(roots[0], bond, kReferenceAlpha)) <= 1e-10 * scale);

    // the default selector takes the smaller root; both solve the equation
    const PowerSolution sol = build_solution(bond, kReferenceAlpha, ProblemKind::Forced);
    CHECK(sol.amplitude == roots[0]);
    const AmplitudeSelector second{AmplitudeSelector::Mode::Index, 1};
    CHECK(build_solution(bond, kReferenceAlpha, ProblemKind::Forced, second).amplitude ==
          roots[1]);
}

TEST_CASE("amplitude_forced reports an empty bracket") {
    BondSpec bond = kReferenceBond;
    bond.forcing_b = 1.0;
    bond.forcing_nu = 2.25;
    CHECK_THROWS_AS(amplitude_forced(bond, kReferenceAlpha, {1e6, 1e8, 64}), NoRootError);
    CHECK_THROWS_AS(amplitude_forced(bond, kReferenceAlpha, {1.0, 0.5, 64}), DomainError);
}

TEST_CASE("build_solution covers both cases") {
    const BondSpec linear{1.0, 0.0, 0.0, 1.0, {}, {}};
    const PowerSolution hom = build_solution(linear, 1.5, ProblemKind::Homogeneous);
    CHECK(rel_diff(hom.amplitude, 0.752252778063675) < 1e-12);
    CHECK(hom.exponent == doctest::Approx(1.5));

    const BondSpec planted = planted_bond(kReferenceBond, kReferenceAlpha);
    const PowerSolution forced =
        build_solution(planted, kReferenceAlpha, ProblemKind::Forced);
    CHECK(std::fabs(forced.amplitude - 1.0) <= 1e-10);
    CHECK(forced.exponent == doctest::Approx(3.75));

    BondSpec tiny_b = kReferenceBond;
    tiny_b.forcing_b = 1e-12;
    tiny_b.forcing_nu = 2.25;
    const PowerSolution reduced = build_solution(tiny_b, kReferenceAlpha, ProblemKind::Forced);
    CHECK(rel_diff(reduced.amplitude, amplitude_homogeneous(kReferenceBond, kReferenceAlpha)) <
          1e-6);

    AmplitudeSelector out_of_range{AmplitudeSelector::Mode::Index, 7};
    CHECK_THROWS_AS(build_solution(planted, kReferenceAlpha, ProblemKind::Forced, out_of_range),
                    DomainError);
}

TEST_CASE("frac_derivative_of_solution applies the power rule exactly") {
    const PowerSolution sol{0.17042951655628777, 3.75, 1};
    const Monomial d_half = frac_derivative_of_solution(sol, 0.5);
    CHECK(d_half.expo == doctest::Approx(3.25));
    CHECK(rel_diff(d_half.coef, sol.amplitude * 2.001935557122343) < 1e-12);

    const Monomial kernel = frac_derivative_of_solution({2.0, 0.5, 1}, 1.5);
    CHECK(kernel.coef == 0.0);

    const Monomial classical = frac_derivative_of_solution({2.0, 1.5, 1}, 1.0);
    CHECK(classical.expo == doctest::Approx(0.5));
    CHECK(rel_diff(classical.coef, 3.0) < 1e-13);

    CHECK_THROWS_AS(frac_derivative_of_solution(sol, 2.5), DomainError);
}

TEST_CASE("homogeneous solutions satisfy the equation as monomials") {
    std::mt19937 rng(20240834);
    for (int i = 0; i < 500; ++i) {
        const testutil::Draw d = testutil::draw_admissible(rng);
        const PowerSolution sol = build_solution(d.bond, d.alpha, ProblemKind::Homogeneous);
        const Monomial lhs = frac_derivative_of_solution(sol, d.alpha);

        // rhs = lambda x^beta y^m = lambda A^m x^{beta + m p}
        const double rhs_coef = d.bond.lam * std::pow(sol.amplitude, d.bond.m);
        const double rhs_expo = d.bond.beta + d.bond.m * sol.exponent;
        CHECK(std::fabs(lhs.expo - rhs_expo) <= 1e-12 * std::max(1.0, std::fabs(rhs_expo)));
        CHECK(rel_diff(lhs.coef, rhs_coef) <= 1e-10);
    }
}

TEST_CASE("forced solutions with planted roots satisfy the equation as monomials") {
    std::mt19937 rng(20240835);
    for (int i = 0; i < 200; ++i) {
        testutil::Draw d = testutil::draw_admissible_forced(rng);
        const BondSpec bond = planted_bond(d.bond, d.alpha);
        const PowerSolution sol = build_solution(bond, d.alpha, ProblemKind::Forced);
        const Monomial lhs = frac_derivative_of_solution(sol, d.alpha);

        // exponent matching is Eq.-18 algebra: beta + m p = nu = p - alpha
        const double nu = *bond.forcing_nu;
        CHECK(std::fabs(bond.beta + bond.m * sol.exponent - nu) <= 1e-12);
        CHECK(std::fabs((sol.exponent - d.alpha) - nu) <= 1e-12);

        const double rhs_coef =
            bond.lam * std::pow(sol.amplitude, bond.m) + *bond.forcing_b;
        CHECK(rel_diff(lhs.coef, rhs_coef) <= 1e-10);
    }
}

TEST_CASE("built solutions keep both free-end exponents positive") {
    std::mt19937 rng(20240836);
    for (int i = 0; i < 200; ++i) {
        const testutil::Draw d = testutil::draw_admissible(rng);
        const PowerSolution sol = build_solution(d.bond, d.alpha, ProblemKind::Homogeneous);
        CHECK(sol.exponent + 2.0 - d.alpha > 0.0);
        CHECK(sol.exponent + 1.0 - d.alpha > 0.0);
    }
}
