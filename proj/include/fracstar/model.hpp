#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fracstar {

/// Per-bond data of the star-graph problem. The bond lives on [0, L] with the
/// branch vertex at x = L and the free end at x = 0.
struct BondSpec {
    double length = 1.0;  // L_j
    double beta = 0.0;    // beta_j, forcing exponent of the nonlinearity
    double m = 0.0;       // m_j, nonlinearity power (m != 1)
    double lam = 1.0;     // lambda_j (nonzero)
    std::optional<double> forcing_b;   // b_j, forced problems only
    std::optional<double> forcing_nu;  // nu_j, forced problems only

    bool operator==(const BondSpec&) const = default;
};

enum class ProblemKind { Homogeneous, Forced };

/// Order alpha in (1,2) plus N >= 2 bonds. bonds[0] is the distinguished
/// in-flow bond of the Kirchhoff rule (bond index 1 in all reports).
struct StarGraphProblem {
    double alpha = 1.5;
    std::vector<BondSpec> bonds;
    ProblemKind kind = ProblemKind::Homogeneous;

    bool operator==(const StarGraphProblem&) const = default;
};

enum class Severity { Warning, Error };

/// One failed constraint; bond_index 0 refers to the problem as a whole.
struct Violation {
    int bond_index = 0;
    std::string constraint;
    double value = 0.0;
    Severity severity = Severity::Error;
};

std::string to_string(const Violation& v);

/// gamma*_j = (beta + m alpha) / (1 - m). Throws DomainError when m = 1.
double gamma_star(const BondSpec& bond, double alpha);

/// Exponent of the power solution, p = (beta + alpha) / (1 - m);
/// satisfies p = gamma_star + alpha identically. Throws DomainError when m = 1.
double solution_exponent(const BondSpec& bond, double alpha);

/// Checks every invariant; returns an empty list iff the problem is well posed.
/// The admissibility window 0 < gamma* - alpha < 1 is reported as a Warning,
/// everything else as an Error. Deterministic order, never throws.
std::vector<Violation> validate(const StarGraphProblem& problem);

/// Forced-case exponent constraint nu = (beta + m alpha)/(1 - m), used both by
/// validation and by problem-file auto-fill.
double forced_nu(const BondSpec& bond, double alpha);

}  // namespace fracstar
