#include "fracstar/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracstar/errors.hpp"

namespace fracstar {
namespace {

constexpr double kExponentZeroTol = 1e-12;
constexpr int kCheckPoints = 16;

LimitKind classify_limit(double exponent) {
    if (exponent > kExponentZeroTol) return LimitKind::Vanishes;
    if (exponent < -kExponentZeroTol) return LimitKind::Divergent;
    return LimitKind::FiniteNonzero;
}

}  // namespace

LeftEndReport left_end_conditions(const PowerSolution& sol, double alpha) {
    LeftEndReport out;
    out.integral_limit_exponent = sol.exponent + 2.0 - alpha;
    out.derivative_limit_exponent = sol.exponent + 1.0 - alpha;
    out.integral_limit = classify_limit(out.integral_limit_exponent);
    out.derivative_limit = classify_limit(out.derivative_limit_exponent);
    out.both_vanish = out.integral_limit == LimitKind::Vanishes &&
                      out.derivative_limit == LimitKind::Vanishes;
    return out;
}

ResidualReport ode_residual(const PowerSolution& sol, const BondSpec& bond, double alpha,
                            const GridSpec& grid) {
    if (grid.n < 8 || !(grid.grading >= 1.0))
        throw DomainError("ode_residual: grid needs n >= 8 and grading >= 1");
    if (!(bond.length > 0.0)) throw DomainError("ode_residual: bond length must be positive");

    const double length = bond.length;
    const double b = bond.forcing_b.value_or(0.0);
    const double nu = bond.forcing_nu.value_or(0.0);
    const auto y = [&sol](double x) { return sol(x); };

    ResidualReport report;
    report.bond_index = sol.bond_index;
    report.left_end = left_end_conditions(sol, alpha);
    report.check_points.reserve(kCheckPoints);

    double worst = 0.0;
    for (int i = 0; i < kCheckPoints; ++i) {
        const double x = length * (0.25 + 0.75 * static_cast<double>(i) / (kCheckPoints - 1));
        const double numeric = rl_derivative_numeric(y, alpha, x, x / grid.n);
        double rhs = bond.lam * std::pow(x, bond.beta) * std::pow(sol(x), bond.m);
        if (bond.forcing_b) rhs += b * std::pow(x, nu);
        report.check_points.push_back({x, numeric, rhs});
        const double rel = std::fabs(numeric - rhs) / std::max(std::fabs(rhs), 1e-30);
        worst = std::max(worst, rel);
    }
    report.max_rel_residual = worst;
    return report;
}

std::vector<double> left_end_decay(const PowerSolution& sol, double alpha, double length,
                                   const GridSpec& grid) {
    const GradedGrid mesh(grid, length);
    const std::vector<double> samples = mesh.sample([&sol](double x) { return sol(x); });
    const double q = 2.0 - alpha;

    // Node indices for x ~ L/256, L/1024, L/4096 under the given grading.
    std::vector<double> out;
    for (int target_pow = 4; target_pow <= 6; ++target_pow) {
        const double frac = std::pow(4.0, -target_pow);  // x/L
        const auto k = static_cast<std::size_t>(
            std::lround(grid.n * std::pow(frac, 1.0 / grid.grading)));
        const std::size_t idx = std::max<std::size_t>(k, 1);
        out.push_back(std::fabs(rl_integral_numeric(samples, mesh, q, mesh.node(idx))));
    }
    return out;
}

double convergence_order(Scheme scheme, const Monomial& target, double q, int levels) {
    if (levels < 3) throw DomainError("convergence_order: need at least 3 levels");
    if (!(target.expo >= q))
        throw DomainError("convergence_order: target exponent must be >= q for smoothness");

    const double x = 1.0;
    std::vector<double> log_step, log_err;
    for (int level = 0; level < levels; ++level) {
        const int n = 64 << level;
        double approx = 0.0, exact = 0.0, step = 0.0;
        switch (scheme) {
            case Scheme::GrunwaldLetnikov: {
                step = x / n;
                approx = rl_derivative_numeric([&target](double t) { return target(t); }, q, x,
                                               step);
                exact = power_derivative(q, target)(x);
                break;
            }
            case Scheme::ProductTrapezoidal: {
                step = x / n;
                const GradedGrid mesh(GridSpec{n, 2.0}, x);
                const std::vector<double> samples =
                    mesh.sample([&target](double t) { return target(t); });
                approx = rl_integral_numeric(samples, mesh, q, x);
                exact = power_integral(q, target)(x);
                break;
            }
            case Scheme::ExactPowerRule: {
                step = x / n;
                approx = power_derivative(q, target)(x);
                exact = approx;
                break;
            }
        }
        const double err = std::fabs(approx - exact);
        if (err < 1e-13) {
            std::ostringstream msg;
            msg << "convergence_order: error " << err << " below the 1e-13 noise floor at level "
                << level;
            throw DegenerateError(msg.str());
        }
        log_step.push_back(std::log(step));
        log_err.push_back(std::log(err));
    }

    // least-squares slope of log(err) against log(step)
    const double n = static_cast<double>(log_step.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < log_step.size(); ++i) {
        sx += log_step[i];
        sy += log_err[i];
        sxx += log_step[i] * log_step[i];
        sxy += log_step[i] * log_err[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace fracstar
