#pragma once

#include <string>
#include <vector>

#include "fracstar/closed_form.hpp"
#include "fracstar/model.hpp"

namespace fracstar {

/// Gaps of the vertex matching conditions at the branch point. A solution set
/// satisfies the vertex conditions iff every gap is 0 within tolerance.
struct VertexResiduals {
    std::vector<double> continuity_gaps;  // c_j - c_1 for j = 2..N
    double kirchhoff_gap = 0.0;           // k_1 - sum_{j>=2} k_j
    double scale = 0.0;                   // max |c_j|, for relative reporting
};

/// Weighted traces c_j = lambda_j^{1/(m_j-1)} A_j L_j^{p_j} at the branch
/// vertex. In the homogeneous case these are lambda-free.
std::vector<double> continuity_values(const StarGraphProblem& problem,
                                      const std::vector<PowerSolution>& solutions);

/// Which form of the Kirchhoff coefficients to evaluate. Derived applies
/// D^{alpha-1} to the power solution; AsPrinted reproduces the published
/// right-hand sides, whose L-exponents differ (diagnostic only).
enum class KirchhoffForm { Derived, AsPrinted };

/// Weighted fluxes k_j = lambda_j^{m_j/(m_j-1)} (D^{alpha-1} y_j)(L_j).
std::vector<double> kirchhoff_terms(const StarGraphProblem& problem,
                                    const std::vector<PowerSolution>& solutions,
                                    KirchhoffForm form = KirchhoffForm::Derived);

/// Builds default per-bond solutions and evaluates both vertex conditions.
VertexResiduals vertex_residuals(const StarGraphProblem& problem);

/// Closed-form bond lengths making the homogeneous continuity chain exact:
/// L_j = (c_1 / C_j)^{1/p_j} with C_j the lambda-free trace coefficient.
/// Returns all N lengths (the first is the given length1).
std::vector<double> solve_lengths_homogeneous(const StarGraphProblem& problem, double length1);

/// Homogeneous Kirchhoff solve. Fluxes are linear in lambda, k_j = K_j lambda_j,
/// so the solutions form the hyperplane K_1 lambda_1 = sum_j K_j lambda_j;
/// lambdas holds the equal-flux-split representative.
struct LambdaAssignment {
    std::vector<double> lambdas;            // size N, lambdas[0] = given lambda_1
    std::vector<double> flux_coefficients;  // K_j with k_j = K_j lambda_j
};

/// Requires the continuity chain to hold already (CompatibilityError otherwise);
/// DegenerateError when some K_j vanishes.
LambdaAssignment solve_lambdas_homogeneous(const StarGraphProblem& problem, double lambda1);

enum class ForcedStatus { Solved, Incompatible, Failed };

struct ForcedSolveOptions {
    double lambda_lo = 1e-6;  // scan bracket for each unknown lambda_j
    double lambda_hi = 1e6;
    int panels = 240;
    RootBracket amplitude_bracket{};  // per-trial amplitude solve
    double solved_rel_tol = 1e-9;     // Kirchhoff gap tolerance for Solved
};

struct ForcedSolveReport {
    ForcedStatus status = ForcedStatus::Failed;
    std::vector<double> lambdas;     // size N, lambdas[0] = given lambda_1
    std::vector<double> amplitudes;  // amplitudes at the returned lambdas
    double kirchhoff_gap = 0.0;
    double kirchhoff_scale = 0.0;  // max |k_j|
    std::vector<std::string> notes;
};

/// Forced-case vertex solve. Stage 1 solves the scalar continuity equation
/// c_j(lambda_j) = c_1 per bond (re-solving the amplitude equation at every
/// trial lambda); stage 2 evaluates the Kirchhoff gap as a compatibility
/// residual. Failed marks a bond with no continuity root in the bracket.
ForcedSolveReport solve_vertex_forced(const StarGraphProblem& problem, double lambda1,
                                      const ForcedSolveOptions& options = {});

}  // namespace fracstar
