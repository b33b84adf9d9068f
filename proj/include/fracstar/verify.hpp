#pragma once

#include <vector>

#include "fracstar/closed_form.hpp"
#include "fracstar/frac_ops.hpp"
#include "fracstar/model.hpp"

namespace fracstar {

/// Classification of a one-sided limit at the free end x -> 0+.
enum class LimitKind { Vanishes, FiniteNonzero, Divergent };

/// Analytic behaviour of (I^{2-alpha} y)(+0) and (D^{alpha-1} y)(+0) for a
/// power solution: limit 0 iff the exponent is positive.
struct LeftEndReport {
    double integral_limit_exponent = 0.0;    // p + 2 - alpha
    double derivative_limit_exponent = 0.0;  // p + 1 - alpha
    LimitKind integral_limit = LimitKind::Vanishes;
    LimitKind derivative_limit = LimitKind::Vanishes;
    bool both_vanish = false;
};

LeftEndReport left_end_conditions(const PowerSolution& sol, double alpha);

struct CheckPoint {
    double x = 0.0;
    double numeric_lhs = 0.0;   // Grunwald-Letnikov D^alpha y
    double analytic_rhs = 0.0;  // lambda x^beta y^m (+ b x^nu)
};

/// Numerical certificate for one bond: max relative ODE residual over 16
/// check points in [0.25 L, L] plus the free-end limits.
struct ResidualReport {
    int bond_index = 1;
    double max_rel_residual = 0.0;
    std::vector<CheckPoint> check_points;
    LeftEndReport left_end;
};

/// Compares the Grunwald-Letnikov derivative of the built solution against
/// the equation's right-hand side. Check points stay in [0.25 L, L], away
/// from the weak singularity where the analytic identity already covers the
/// interval exactly.
ResidualReport ode_residual(const PowerSolution& sol, const BondSpec& bond, double alpha,
                            const GridSpec& grid = {});

/// |I^{2-alpha} y| sampled at three grid nodes shrinking toward the free end
/// (x ~ L/256, L/1024, L/4096 on the default grid); monotone decay backs the
/// analytic vanish claim.
std::vector<double> left_end_decay(const PowerSolution& sol, double alpha, double length,
                                   const GridSpec& grid = {});

enum class Scheme { GrunwaldLetnikov, ProductTrapezoidal, ExactPowerRule };

/// Least-squares slope of log(error) vs log(step) across halving steps, with
/// the power rule as the exact reference. Throws DegenerateError when errors
/// fall below the 1e-13 noise floor before all levels complete.
double convergence_order(Scheme scheme, const Monomial& target, double q, int levels);

}  // namespace fracstar
