#include "fracstar/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracstar/errors.hpp"
#include "fracstar/specfun.hpp"

namespace fracstar {
namespace {

// Signed ratio Gamma(a)/Gamma(b) that throws PoleError for either pole;
// amplitude formulas must report poles instead of using the 1/Gamma convention.
double strict_gamma_ratio(double a, double b) {
    const SignedLogGamma la = signed_log_gamma(a);
    const SignedLogGamma lb = signed_log_gamma(b);
    return static_cast<double>(la.sign * lb.sign) * std::exp(la.log_abs - lb.log_abs);
}

struct TreqCoeffs {
    double g_full;     // Gamma(p+1)
    double g_reduced;  // Gamma(p+1-alpha) = Gamma(gamma*+1)
    double lam;
    double b;
    double m;

    double operator()(double amplitude) const {
        double powered;
        if (amplitude < 0.0) {
            if (!nearly_integer(m))
                throw DomainError("treq_residual: A < 0 with non-integer m has no real power");
            powered = real_power(amplitude, m);
        } else {
            powered = std::pow(amplitude, m);
        }
        return g_reduced * (lam * powered + b) - g_full * amplitude;
    }
};

TreqCoeffs treq_coeffs(const BondSpec& bond, double alpha) {
    const double p = solution_exponent(bond, alpha);
    return {gamma(p + 1.0), gamma(p + 1.0 - alpha), bond.lam, bond.forcing_b.value_or(0.0),
            bond.m};
}

// Bisection refinement of a bracketed sign change; stops at the residual
// tolerance or when the interval reaches machine width, returning whichever
// trial point carried the smallest residual.
template <typename F>
double refine_root(const F& f, double lo, double hi, double f_lo, double f_hi, double tol) {
    double best = std::fabs(f_lo) <= std::fabs(f_hi) ? lo : hi;
    double best_res = std::min(std::fabs(f_lo), std::fabs(f_hi));
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at machine width
        const double f_mid = f(mid);
        if (std::fabs(f_mid) < best_res) {
            best_res = std::fabs(f_mid);
            best = mid;
        }
        if (f_mid == 0.0 || best_res <= tol) return best;
        if ((f_lo < 0.0) == (f_mid < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    return best;
}

}  // namespace

bool nearly_integer(double x) { return std::fabs(x - std::round(x)) <= 1e-9; }

double real_power(double base, double expo) {
    if (base > 0.0) return std::pow(base, expo);
    if (base == 0.0) {
        if (expo > 0.0) return 0.0;
        if (expo == 0.0) return 1.0;
        throw BranchError("real_power: 0 raised to a negative exponent");
    }
    if (!nearly_integer(expo)) {
        std::ostringstream msg;
        msg << "real_power: negative base " << base << " with non-integer exponent " << expo
            << " has no real principal branch";
        throw BranchError(msg.str());
    }
    const double n = std::round(expo);
    const double magnitude = std::pow(-base, n);
    const bool odd = std::fmod(std::fabs(n), 2.0) == 1.0;
    return odd ? -magnitude : magnitude;
}

double amplitude_homogeneous(const BondSpec& bond, double alpha) {
    if (bond.lam == 0.0) throw DomainError("amplitude_homogeneous: lambda must be nonzero");
    const double p = solution_exponent(bond, alpha);
    const double gs = gamma_star(bond, alpha);
    const double base = strict_gamma_ratio(p + 1.0, gs + 1.0) / bond.lam;
    return real_power(base, 1.0 / (bond.m - 1.0));
}

double treq_residual(double amplitude, const BondSpec& bond, double alpha) {
    return treq_coeffs(bond, alpha)(amplitude);
}

std::vector<double> amplitude_forced(const BondSpec& bond, double alpha,
                                     const RootBracket& bracket) {
    if (!(bracket.lo > 0.0) || !(bracket.lo < bracket.hi) || bracket.panels < 1)
        throw DomainError("amplitude_forced: need 0 < lo < hi and panels >= 1");

    const TreqCoeffs residual = treq_coeffs(bond, alpha);
    const double scale = std::max(std::fabs(residual.g_reduced * residual.b), 1.0);
    const double tol = 1e-12 * scale;
    const double log_lo = std::log(bracket.lo);
    const double log_step = (std::log(bracket.hi) - log_lo) / bracket.panels;

    std::vector<double> roots;
    double prev_x = bracket.lo;
    double prev_f = residual(prev_x);
    if (prev_f == 0.0) roots.push_back(prev_x);
    for (int i = 1; i <= bracket.panels; ++i) {
        const double x = (i == bracket.panels) ? bracket.hi : std::exp(log_lo + i * log_step);
        const double fx = residual(x);
        if (fx == 0.0) {
            roots.push_back(x);
        } else if ((prev_f < 0.0) != (fx < 0.0) && prev_f != 0.0) {
            roots.push_back(refine_root(residual, prev_x, x, prev_f, fx, tol));
        }
        prev_x = x;
        prev_f = fx;
    }

    if (roots.empty()) {
        std::ostringstream msg;
        msg << "amplitude_forced: no sign change of the amplitude equation in [" << bracket.lo
            << ", " << bracket.hi << "] (" << bracket.panels
            << " log panels; residual at ends: " << residual(bracket.lo) << ", "
            << residual(bracket.hi) << ")";
        throw NoRootError(msg.str());
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

PowerSolution build_solution(const BondSpec& bond, double alpha, ProblemKind kind,
                             const AmplitudeSelector& selector, int bond_index) {
    const double p = solution_exponent(bond, alpha);
    if (!(p > -1.0)) {
        std::ostringstream msg;
        msg << "build_solution: solution exponent " << p << " <= -1 on bond " << bond_index;
        throw DomainError(msg.str());
    }

    double amplitude;
    if (kind == ProblemKind::Homogeneous) {
        amplitude = amplitude_homogeneous(bond, alpha);
    } else {
        const std::vector<double> roots = amplitude_forced(bond, alpha);
        if (selector.mode == AmplitudeSelector::Mode::SmallestPositive) {
            amplitude = roots.front();  // roots are positive (bracket.lo > 0) and ascending
        } else {
            if (selector.index >= roots.size()) {
                std::ostringstream msg;
                msg << "build_solution: root index " << selector.index << " out of range, got "
                    << roots.size() << " roots";
                throw DomainError(msg.str());
            }
            amplitude = roots[selector.index];
        }
    }
    return {amplitude, p, bond_index};
}

std::vector<PowerSolution> build_solutions(const StarGraphProblem& problem,
                                           const AmplitudeSelector& selector) {
    std::vector<PowerSolution> out;
    out.reserve(problem.bonds.size());
    for (std::size_t i = 0; i < problem.bonds.size(); ++i)
        out.push_back(build_solution(problem.bonds[i], problem.alpha, problem.kind, selector,
                                     static_cast<int>(i) + 1));
    return out;
}

Monomial frac_derivative_of_solution(const PowerSolution& sol, double q) {
    if (!(q > 0.0) || !(q < 2.0)) {
        std::ostringstream msg;
        msg << "frac_derivative_of_solution: order q = " << q << " outside (0,2)";
        throw DomainError(msg.str());
    }
    return power_derivative(q, sol.as_monomial());
}

}  // namespace fracstar
