#include "fracstar/model.hpp"

#include <cmath>
#include <sstream>

#include "fracstar/errors.hpp"

namespace fracstar {
namespace {

void require_m_not_one(double m, const char* op) {
    if (m == 1.0) {
        std::ostringstream msg;
        msg << op << ": m = 1 makes the exponent (beta+alpha)/(1-m) undefined";
        throw DomainError(msg.str());
    }
}

}  // namespace

std::string to_string(const Violation& v) {
    std::ostringstream out;
    out << (v.severity == Severity::Error ? "error" : "warning");
    if (v.bond_index > 0) out << " [bond " << v.bond_index << "]";
    out << ": " << v.constraint << " (value " << v.value << ")";
    return out.str();
}

double gamma_star(const BondSpec& bond, double alpha) {
    require_m_not_one(bond.m, "gamma_star");
    return (bond.beta + bond.m * alpha) / (1.0 - bond.m);
}

double solution_exponent(const BondSpec& bond, double alpha) {
    require_m_not_one(bond.m, "solution_exponent");
    return (bond.beta + alpha) / (1.0 - bond.m);
}

double forced_nu(const BondSpec& bond, double alpha) { return gamma_star(bond, alpha); }

std::vector<Violation> validate(const StarGraphProblem& problem) {
    std::vector<Violation> out;
    const double alpha = problem.alpha;

    if (!(alpha > 1.0 && alpha < 2.0))
        out.push_back({0, "alpha out of (1,2)", alpha, Severity::Error});
    if (problem.bonds.size() < 2)
        out.push_back({0, "a star graph needs at least 2 bonds",
                       static_cast<double>(problem.bonds.size()), Severity::Error});

    const bool forced = problem.kind == ProblemKind::Forced;
    for (std::size_t i = 0; i < problem.bonds.size(); ++i) {
        const BondSpec& bond = problem.bonds[i];
        const int idx = static_cast<int>(i) + 1;

        if (!(bond.length > 0.0))
            out.push_back({idx, "length must be positive", bond.length, Severity::Error});
        if (bond.m == 1.0) out.push_back({idx, "m must differ from 1", bond.m, Severity::Error});
        if (bond.lam == 0.0)
            out.push_back({idx, "lambda must be nonzero", bond.lam, Severity::Error});

        if (forced) {
            if (!(bond.m > 0.0))
                out.push_back({idx, "forced case requires m > 0", bond.m, Severity::Error});
            if (!bond.forcing_b.has_value())
                out.push_back({idx, "forced case requires b", 0.0, Severity::Error});
            if (!bond.forcing_nu.has_value()) {
                out.push_back({idx, "forced case requires nu", 0.0, Severity::Error});
            } else if (bond.m != 1.0) {
                const double expected = forced_nu(bond, alpha);
                const double tol = 1e-12 * std::max(1.0, std::fabs(expected));
                if (std::fabs(*bond.forcing_nu - expected) > tol)
                    out.push_back({idx, "nu must equal (beta + m alpha)/(1 - m)",
                                   *bond.forcing_nu, Severity::Error});
            }
        } else if (bond.forcing_b || bond.forcing_nu) {
            out.push_back({idx, "homogeneous case takes no forcing parameters",
                           bond.forcing_b.value_or(bond.forcing_nu.value_or(0.0)),
                           Severity::Error});
        }

        if (bond.m != 1.0 && alpha > 1.0 && alpha < 2.0) {
            const double offset = gamma_star(bond, alpha) - alpha;
            if (!(offset > 0.0 && offset < 1.0))
                out.push_back({idx, "admissibility 0 < gamma* - alpha < 1 violated", offset,
                               Severity::Warning});
        }
    }
    return out;
}

}  // namespace fracstar
