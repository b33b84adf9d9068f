#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fracstar/frac_ops.hpp"
#include "fracstar/model.hpp"

namespace fracstar {

/// One monomial solution y(x) = amplitude * x^exponent on (0, L].
struct PowerSolution {
    double amplitude = 0.0;
    double exponent = 0.0;  // p_j = gamma_j - 1, must stay > -1
    int bond_index = 1;

    double operator()(double x) const { return amplitude * std::pow(x, exponent); }
    Monomial as_monomial() const { return {amplitude, exponent}; }
};

/// Real principal branch of base^expo. Negative bases are allowed only for
/// near-integer exponents (sign handled explicitly); otherwise BranchError.
double real_power(double base, double expo);

/// |x - round(x)| <= 1e-9, the integer-exponent window used by real_power.
bool nearly_integer(double x);

/// Amplitude of the homogeneous power solution,
/// A = [Gamma(p+1) / (lambda Gamma(gamma*+1))]^{1/(m-1)}.
double amplitude_homogeneous(const BondSpec& bond, double alpha);

/// Residual of the forced-case transcendental amplitude equation:
/// Gamma(p+1-alpha) (lambda A^m + b) - Gamma(p+1) A.
/// Zero iff A is an admissible amplitude.
double treq_residual(double amplitude, const BondSpec& bond, double alpha);

/// Log-spaced scan bracket for the forced amplitude equation.
struct RootBracket {
    double lo = 1e-8;
    double hi = 1e8;
    int panels = 256;
};

/// All roots of the forced amplitude equation inside the bracket, ascending.
/// Each sign change is refined by bisection to machine precision.
/// Throws NoRootError (with the scan trace) when no sign change is found.
std::vector<double> amplitude_forced(const BondSpec& bond, double alpha,
                                     const RootBracket& bracket = {});

/// Which root of the forced amplitude equation build_solution picks.
struct AmplitudeSelector {
    enum class Mode { SmallestPositive, Index };
    Mode mode = Mode::SmallestPositive;
    std::size_t index = 0;  // ascending-root index when mode == Index
};

/// Builds the per-bond power solution: explicit amplitude in the homogeneous
/// case, selected transcendental root in the forced case; the exponent is
/// (beta + alpha)/(1 - m) in both.
PowerSolution build_solution(const BondSpec& bond, double alpha, ProblemKind kind,
                             const AmplitudeSelector& selector = {}, int bond_index = 1);

/// One solution per bond, bond indices 1..N.
std::vector<PowerSolution> build_solutions(const StarGraphProblem& problem,
                                           const AmplitudeSelector& selector = {});

/// Exact fractional derivative D^q of a power solution via the power rule.
/// Requires q in (0,2).
Monomial frac_derivative_of_solution(const PowerSolution& sol, double q);

}  // namespace fracstar
