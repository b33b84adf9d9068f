#include "fracstar/vertex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracstar/errors.hpp"
#include "fracstar/specfun.hpp"

namespace fracstar {
namespace {

void require_kind(const StarGraphProblem& problem, ProblemKind kind, const char* op) {
    if (problem.kind != kind) {
        std::ostringstream msg;
        msg << op << ": problem kind mismatch";
        throw DomainError(msg.str());
    }
}

void require_valid(const StarGraphProblem& problem, const char* op) {
    for (const Violation& v : validate(problem)) {
        if (v.severity == Severity::Error) {
            std::ostringstream msg;
            msg << op << ": invalid problem, " << to_string(v);
            throw DomainError(msg.str());
        }
    }
}

// Lambda-free trace coefficient C_j = [Gamma(p+1)/Gamma(gamma*+1)]^{1/(m-1)},
// the bracket of the homogeneous amplitude with lambda divided out.
double trace_coefficient(const BondSpec& bond, double alpha) {
    const double p = solution_exponent(bond, alpha);
    const double gs = gamma_star(bond, alpha);
    return real_power(gamma_ratio(p + 1.0, gs + 1.0), 1.0 / (bond.m - 1.0));
}

double lambda_weight(double lam, double m, double exponent_num) {
    // lam^{exponent_num/(m-1)} under the real-branch rule
    return real_power(lam, exponent_num / (m - 1.0));
}

}  // namespace

std::vector<double> continuity_values(const StarGraphProblem& problem,
                                      const std::vector<PowerSolution>& solutions) {
    if (solutions.size() != problem.bonds.size())
        throw DomainError("continuity_values: one solution per bond required");
    std::vector<double> out(solutions.size());
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        const BondSpec& bond = problem.bonds[i];
        out[i] = lambda_weight(bond.lam, bond.m, 1.0) * solutions[i].amplitude *
                 std::pow(bond.length, solutions[i].exponent);
    }
    return out;
}

std::vector<double> kirchhoff_terms(const StarGraphProblem& problem,
                                    const std::vector<PowerSolution>& solutions,
                                    KirchhoffForm form) {
    if (solutions.size() != problem.bonds.size())
        throw DomainError("kirchhoff_terms: one solution per bond required");
    const double alpha = problem.alpha;
    std::vector<double> out(solutions.size());
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        const BondSpec& bond = problem.bonds[i];
        const double p = solutions[i].exponent;
        const double weight = lambda_weight(bond.lam, bond.m, bond.m);
        if (form == KirchhoffForm::Derived) {
            // k_j from the definition: D^{alpha-1} x^p = G(p+1)/G(p+2-alpha) x^{p+1-alpha}
            out[i] = weight * solutions[i].amplitude * gamma_ratio(p + 1.0, p + 2.0 - alpha) *
                     std::pow(bond.length, p + 1.0 - alpha);
        } else if (problem.kind == ProblemKind::Homogeneous) {
            // As printed: lambda/(gamma*+1) [G(p+1)/G(gamma*+1)]^{1/(m-1)+1} L^{p+1}
            const double gs = gamma_star(bond, alpha);
            out[i] = bond.lam / (gs + 1.0) *
                     real_power(gamma_ratio(p + 1.0, gs + 1.0), 1.0 / (bond.m - 1.0) + 1.0) *
                     std::pow(bond.length, p + 1.0);
        } else {
            // As printed: lambda^{m/(m-1)} A G(gamma)/G(gamma-alpha) L^{gamma-alpha-1}
            const double g = p + 1.0;
            out[i] = weight * solutions[i].amplitude * gamma_ratio(g, g - alpha) *
                     std::pow(bond.length, g - alpha - 1.0);
        }
    }
    return out;
}

VertexResiduals vertex_residuals(const StarGraphProblem& problem) {
    require_valid(problem, "vertex_residuals");
    const std::vector<PowerSolution> solutions = build_solutions(problem);
    const std::vector<double> c = continuity_values(problem, solutions);
    const std::vector<double> k = kirchhoff_terms(problem, solutions);

    VertexResiduals res;
    res.continuity_gaps.reserve(c.size() - 1);
    for (std::size_t j = 1; j < c.size(); ++j) res.continuity_gaps.push_back(c[j] - c[0]);
    res.kirchhoff_gap = k[0];
    for (std::size_t j = 1; j < k.size(); ++j) res.kirchhoff_gap -= k[j];
    res.scale = 0.0;
    for (double v : c) res.scale = std::max(res.scale, std::fabs(v));
    return res;
}

std::vector<double> solve_lengths_homogeneous(const StarGraphProblem& problem, double length1) {
    require_kind(problem, ProblemKind::Homogeneous, "solve_lengths_homogeneous");
    if (!(length1 > 0.0)) throw DomainError("solve_lengths_homogeneous: length1 must be positive");
    const double alpha = problem.alpha;

    const double p1 = solution_exponent(problem.bonds[0], alpha);
    const double c1 = trace_coefficient(problem.bonds[0], alpha) * std::pow(length1, p1);

    std::vector<double> lengths(problem.bonds.size());
    lengths[0] = length1;
    for (std::size_t j = 1; j < problem.bonds.size(); ++j) {
        const BondSpec& bond = problem.bonds[j];
        const double p = solution_exponent(bond, alpha);
        if (p == 0.0) {
            std::ostringstream msg;
            msg << "solve_lengths_homogeneous: bond " << j + 1 << " has p = 0, length is free";
            throw DomainError(msg.str());
        }
        const double base = c1 / trace_coefficient(bond, alpha);
        if (!(base > 0.0)) {
            std::ostringstream msg;
            msg << "solve_lengths_homogeneous: bond " << j + 1 << " needs L^p = " << base
                << " <= 0, no real length";
            throw BranchError(msg.str());
        }
        lengths[j] = std::pow(base, 1.0 / p);
    }
    return lengths;
}

LambdaAssignment solve_lambdas_homogeneous(const StarGraphProblem& problem, double lambda1) {
    require_kind(problem, ProblemKind::Homogeneous, "solve_lambdas_homogeneous");
    require_valid(problem, "solve_lambdas_homogeneous");
    const double alpha = problem.alpha;
    const std::size_t n = problem.bonds.size();

    // Continuity must hold before Kirchhoff can be balanced (the chain is
    // lambda-free, so no choice of lambda can repair it).
    std::vector<double> c(n);
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const BondSpec& bond = problem.bonds[j];
        c[j] = trace_coefficient(bond, alpha) *
               std::pow(bond.length, solution_exponent(bond, alpha));
        scale = std::max(scale, std::fabs(c[j]));
    }
    for (std::size_t j = 1; j < n; ++j) {
        if (std::fabs(c[j] - c[0]) > 1e-9 * scale) {
            std::ostringstream msg;
            msg << "solve_lambdas_homogeneous: continuity chain broken, |c_" << j + 1
                << " - c_1| = " << std::fabs(c[j] - c[0]) << " (scale " << scale
                << "); solve lengths first";
            throw CompatibilityError(msg.str());
        }
    }

    // k_j = K_j lambda_j with lambda-free K_j.
    LambdaAssignment out;
    out.flux_coefficients.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const BondSpec& bond = problem.bonds[j];
        const double p = solution_exponent(bond, alpha);
        out.flux_coefficients[j] = trace_coefficient(bond, alpha) *
                                   gamma_ratio(p + 1.0, p + 2.0 - alpha) *
                                   std::pow(bond.length, p + 1.0 - alpha);
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (out.flux_coefficients[j] == 0.0) {
            std::ostringstream msg;
            msg << "solve_lambdas_homogeneous: flux coefficient K_" << j + 1 << " vanishes";
            throw DegenerateError(msg.str());
        }
    }

    // Equal-flux tie-break: k_2 = ... = k_N = K_1 lambda_1 / (N-1).
    out.lambdas.resize(n);
    out.lambdas[0] = lambda1;
    const double target = out.flux_coefficients[0] * lambda1 / static_cast<double>(n - 1);
    for (std::size_t j = 1; j < n; ++j) out.lambdas[j] = target / out.flux_coefficients[j];
    return out;
}

ForcedSolveReport solve_vertex_forced(const StarGraphProblem& problem, double lambda1,
                                      const ForcedSolveOptions& options) {
    require_kind(problem, ProblemKind::Forced, "solve_vertex_forced");
    require_valid(problem, "solve_vertex_forced");
    if (!(options.lambda_lo > 0.0) || !(options.lambda_lo < options.lambda_hi) ||
        options.panels < 1)
        throw DomainError("solve_vertex_forced: need 0 < lambda_lo < lambda_hi and panels >= 1");

    const double alpha = problem.alpha;
    const std::size_t n = problem.bonds.size();

    ForcedSolveReport report;
    report.lambdas.assign(n, 0.0);
    report.amplitudes.assign(n, 0.0);
    report.lambdas[0] = lambda1;

    // Bond 1 is fully specified: its trace fixes the continuity target.
    BondSpec bond1 = problem.bonds[0];
    bond1.lam = lambda1;
    const double a1 = amplitude_forced(bond1, alpha, options.amplitude_bracket).front();
    report.amplitudes[0] = a1;
    const double c1 = lambda_weight(lambda1, bond1.m, 1.0) * a1 *
                      std::pow(bond1.length, solution_exponent(bond1, alpha));

    // Stage 1: per bond j >= 2, root-find lambda_j with c_j(lambda_j) = c_1.
    bool all_found = true;
    for (std::size_t j = 1; j < n; ++j) {
        const BondSpec& bond = problem.bonds[j];
        const double p = solution_exponent(bond, alpha);
        const auto gap = [&](double lam) {
            BondSpec trial = bond;
            trial.lam = lam;
            const double a = amplitude_forced(trial, alpha, options.amplitude_bracket).front();
            return lambda_weight(lam, bond.m, 1.0) * a * std::pow(bond.length, p) - c1;
        };

        const double log_lo = std::log(options.lambda_lo);
        const double log_step = (std::log(options.lambda_hi) - log_lo) / options.panels;
        double root = 0.0;
        bool found = false;
        double prev_x = options.lambda_lo;
        double prev_f = 0.0;
        bool prev_ok = false;
        try {
            prev_f = gap(prev_x);
            prev_ok = true;
            if (prev_f == 0.0) {
                root = prev_x;
                found = true;
            }
        } catch (const Error&) {
            prev_ok = false;
        }
        for (int i = 1; i <= options.panels && !found; ++i) {
            const double x =
                (i == options.panels) ? options.lambda_hi : std::exp(log_lo + i * log_step);
            double fx = 0.0;
            bool ok = true;
            try {
                fx = gap(x);
            } catch (const Error&) {
                ok = false;  // no amplitude root or branch failure at this trial lambda
            }
            if (ok && fx == 0.0) {
                root = x;
                found = true;
            } else if (ok && prev_ok && (prev_f < 0.0) != (fx < 0.0)) {
                // bisect gap() over [prev_x, x]
                double lo = prev_x, hi = x, f_lo = prev_f, f_hi = fx;
                for (int iter = 0; iter < 200; ++iter) {
                    const double mid = 0.5 * (lo + hi);
                    if (mid <= lo || mid >= hi) break;
                    const double f_mid = gap(mid);
                    if (f_mid == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    if ((f_lo < 0.0) == (f_mid < 0.0)) {
                        lo = mid;
                        f_lo = f_mid;
                    } else {
                        hi = mid;
                        f_hi = f_mid;
                    }
                }
                root = std::fabs(f_lo) <= std::fabs(f_hi) ? lo : hi;
                found = true;
            }
            prev_x = x;
            prev_f = fx;
            prev_ok = ok;
        }

        if (!found) {
            all_found = false;
            std::ostringstream msg;
            msg << "bond " << j + 1 << ": no continuity root in [" << options.lambda_lo << ", "
                << options.lambda_hi << "] (" << options.panels
                << " log panels, target c_1 = " << c1 << ")";
            report.notes.push_back(msg.str());
            continue;
        }
        report.lambdas[j] = root;
        BondSpec solved = bond;
        solved.lam = root;
        report.amplitudes[j] = amplitude_forced(solved, alpha, options.amplitude_bracket).front();
    }

    if (!all_found) {
        report.status = ForcedStatus::Failed;
        return report;
    }

    // Stage 2: Kirchhoff as a compatibility residual at the solved lambdas.
    StarGraphProblem solved = problem;
    std::vector<PowerSolution> solutions(n);
    for (std::size_t j = 0; j < n; ++j) {
        solved.bonds[j].lam = report.lambdas[j];
        solutions[j] = {report.amplitudes[j], solution_exponent(solved.bonds[j], alpha),
                        static_cast<int>(j) + 1};
    }
    const std::vector<double> k = kirchhoff_terms(solved, solutions);
    report.kirchhoff_gap = k[0];
    for (std::size_t j = 1; j < n; ++j) report.kirchhoff_gap -= k[j];
    report.kirchhoff_scale = 0.0;
    for (double v : k) report.kirchhoff_scale = std::max(report.kirchhoff_scale, std::fabs(v));

    const double tol = options.solved_rel_tol * std::max(report.kirchhoff_scale, 1e-300);
    report.status =
        std::fabs(report.kirchhoff_gap) <= tol ? ForcedStatus::Solved : ForcedStatus::Incompatible;
    if (report.status == ForcedStatus::Incompatible) {
        std::ostringstream msg;
        msg << "kirchhoff gap " << report.kirchhoff_gap << " exceeds " << options.solved_rel_tol
            << " x scale " << report.kirchhoff_scale;
        report.notes.push_back(msg.str());
    }
    return report;
}

}  // namespace fracstar
