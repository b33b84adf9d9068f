#include "fracstar/cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracstar/errors.hpp"
#include "fracstar/model.hpp"
#include "fracstar/problem_io.hpp"
#include "fracstar/specfun.hpp"
#include "fracstar/verify.hpp"
#include "fracstar/vertex.hpp"

namespace fracstar {
namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerification = 4;
constexpr double kVerifyResidualTol = 1e-3;
constexpr int kSampleCount = 32;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string kind_name(ProblemKind kind) {
    return kind == ProblemKind::Forced ? "forced" : "homogeneous";
}

std::string limit_name(LimitKind kind) {
    switch (kind) {
        case LimitKind::Vanishes: return "vanishes";
        case LimitKind::FiniteNonzero: return "finite_nonzero";
        case LimitKind::Divergent: return "divergent";
    }
    return "?";
}

struct RunConfig {
    std::string problem_path;
    std::string format = "json";
    GridSpec grid{};
    std::string sweep;
};

/// Prints every violation to the diagnostic stream; returns kExitValidation
/// when errors are present.
int report_violations(const StarGraphProblem& problem, std::ostream& err) {
    int errors = 0;
    for (const Violation& v : validate(problem)) {
        err << to_string(v) << "\n";
        if (v.severity == Severity::Error) ++errors;
    }
    return errors > 0 ? kExitValidation : kExitOk;
}

json bond_row(int index, const BondSpec& bond, const PowerSolution& sol, double c, double k) {
    return json{{"bond_index", index}, {"A", sol.amplitude},  {"p", sol.exponent},
                {"lambda", bond.lam},  {"c_value", c},        {"k_value", k}};
}

void emit_json(const json& doc, std::ostream& out) { out << doc.dump(2) << "\n"; }

// --- validate ---------------------------------------------------------------

int cmd_validate(const StarGraphProblem& problem, const RunConfig& cfg, std::ostream& out) {
    const std::vector<Violation> violations = validate(problem);
    int errors = 0;
    for (const Violation& v : violations)
        if (v.severity == Severity::Error) ++errors;

    if (cfg.format == "json") {
        json rows = json::array();
        for (const Violation& v : violations)
            rows.push_back({{"bond_index", v.bond_index},
                            {"severity", v.severity == Severity::Error ? "error" : "warning"},
                            {"constraint", v.constraint},
                            {"value", v.value}});
        emit_json(json{{"command", "validate"},
                       {"violations", rows},
                       {"error_count", errors},
                       {"warning_count", static_cast<int>(violations.size()) - errors}},
                  out);
    } else {
        out << "bond_index,severity,constraint,value\n";
        for (const Violation& v : violations)
            out << v.bond_index << "," << (v.severity == Severity::Error ? "error" : "warning")
                << ",\"" << v.constraint << "\"," << num(v.value) << "\n";
    }
    return errors > 0 ? kExitValidation : kExitOk;
}

// --- solve ------------------------------------------------------------------

void emit_solve_csv(const StarGraphProblem& problem, const std::vector<PowerSolution>& sols,
                    const std::vector<double>& c, const std::vector<double>& k,
                    std::ostream& out) {
    out << "bond_index,A,p,lambda,c_value,k_value,max_rel_residual\n";
    for (std::size_t j = 0; j < problem.bonds.size(); ++j)
        out << j + 1 << "," << num(sols[j].amplitude) << "," << num(sols[j].exponent) << ","
            << num(problem.bonds[j].lam) << "," << num(c[j]) << "," << num(k[j]) << ",\n";
}

int cmd_solve(const StarGraphProblem& problem, const RunConfig& cfg, std::ostream& out,
              std::ostream& err) {
    if (int rc = report_violations(problem, err); rc != kExitOk) return rc;

    if (problem.kind == ProblemKind::Homogeneous) {
        const LambdaAssignment assignment =
            solve_lambdas_homogeneous(problem, problem.bonds[0].lam);
        StarGraphProblem solved = problem;
        for (std::size_t j = 0; j < solved.bonds.size(); ++j)
            solved.bonds[j].lam = assignment.lambdas[j];

        const std::vector<PowerSolution> sols = build_solutions(solved);
        const std::vector<double> c = continuity_values(solved, sols);
        const std::vector<double> k = kirchhoff_terms(solved, sols);
        const VertexResiduals res = vertex_residuals(solved);

        if (cfg.format == "json") {
            json bonds = json::array();
            for (std::size_t j = 0; j < solved.bonds.size(); ++j)
                bonds.push_back(bond_row(static_cast<int>(j) + 1, solved.bonds[j], sols[j], c[j],
                                         k[j]));
            emit_json(json{{"command", "solve"},
                           {"kind", kind_name(problem.kind)},
                           {"alpha", problem.alpha},
                           {"status", "solved"},
                           {"bonds", bonds},
                           {"flux_coefficients", assignment.flux_coefficients},
                           {"vertex",
                            {{"continuity_gaps", res.continuity_gaps},
                             {"kirchhoff_gap", res.kirchhoff_gap},
                             {"scale", res.scale}}}},
                      out);
        } else {
            emit_solve_csv(solved, sols, c, k, out);
        }
        return kExitOk;
    }

    const ForcedSolveReport report = solve_vertex_forced(problem, problem.bonds[0].lam);
    for (const std::string& note : report.notes) err << "solve_vertex_forced: " << note << "\n";

    StarGraphProblem solved = problem;
    std::vector<PowerSolution> sols(problem.bonds.size());
    for (std::size_t j = 0; j < problem.bonds.size(); ++j) {
        solved.bonds[j].lam = report.lambdas[j];
        sols[j] = {report.amplitudes[j], solution_exponent(problem.bonds[j], problem.alpha),
                   static_cast<int>(j) + 1};
    }
    const bool have_values = report.status != ForcedStatus::Failed;
    std::vector<double> c, k;
    if (have_values) {
        c = continuity_values(solved, sols);
        k = kirchhoff_terms(solved, sols);
    }

    const std::string status = report.status == ForcedStatus::Solved ? "solved"
                               : report.status == ForcedStatus::Incompatible ? "incompatible"
                                                                             : "failed";
    if (cfg.format == "json") {
        json bonds = json::array();
        for (std::size_t j = 0; j < problem.bonds.size(); ++j) {
            json row{{"bond_index", static_cast<int>(j) + 1},
                     {"A", report.amplitudes[j]},
                     {"p", sols[j].exponent},
                     {"lambda", report.lambdas[j]}};
            row["c_value"] = have_values ? json(c[j]) : json();
            row["k_value"] = have_values ? json(k[j]) : json();
            bonds.push_back(row);
        }
        emit_json(json{{"command", "solve"},
                       {"kind", kind_name(problem.kind)},
                       {"alpha", problem.alpha},
                       {"status", status},
                       {"bonds", bonds},
                       {"kirchhoff_gap", report.kirchhoff_gap},
                       {"kirchhoff_scale", report.kirchhoff_scale},
                       {"notes", report.notes}},
                  out);
    } else {
        out << "bond_index,A,p,lambda,c_value,k_value,max_rel_residual\n";
        for (std::size_t j = 0; j < problem.bonds.size(); ++j) {
            out << j + 1 << "," << num(report.amplitudes[j]) << "," << num(sols[j].exponent)
                << "," << num(report.lambdas[j]) << ",";
            if (have_values)
                out << num(c[j]) << "," << num(k[j]);
            else
                out << ",";
            out << ",\n";
        }
    }
    return report.status == ForcedStatus::Solved ? kExitOk : kExitSolver;
}

// --- verify -----------------------------------------------------------------

int cmd_verify(const StarGraphProblem& problem, const RunConfig& cfg, std::ostream& out,
               std::ostream& err) {
    if (int rc = report_violations(problem, err); rc != kExitOk) return rc;

    const std::vector<PowerSolution> sols = build_solutions(problem);
    const std::vector<double> c = continuity_values(problem, sols);
    const std::vector<double> k = kirchhoff_terms(problem, sols);
    const VertexResiduals res = vertex_residuals(problem);

    std::vector<ResidualReport> reports;
    reports.reserve(problem.bonds.size());
    bool pass = true;
    for (std::size_t j = 0; j < problem.bonds.size(); ++j) {
        reports.push_back(ode_residual(sols[j], problem.bonds[j], problem.alpha, cfg.grid));
        if (!(reports.back().max_rel_residual <= kVerifyResidualTol) ||
            !reports.back().left_end.both_vanish)
            pass = false;
    }

    if (cfg.format == "json") {
        json bonds = json::array();
        for (std::size_t j = 0; j < problem.bonds.size(); ++j) {
            const ResidualReport& rep = reports[j];
            json points = json::array();
            for (const CheckPoint& cp : rep.check_points)
                points.push_back({{"x", cp.x}, {"numeric", cp.numeric_lhs},
                                  {"analytic", cp.analytic_rhs}});
            json row = bond_row(static_cast<int>(j) + 1, problem.bonds[j], sols[j], c[j], k[j]);
            row["max_rel_residual"] = rep.max_rel_residual;
            row["check_points"] = points;
            row["left_end"] = {{"integral_exponent", rep.left_end.integral_limit_exponent},
                               {"derivative_exponent", rep.left_end.derivative_limit_exponent},
                               {"integral_limit", limit_name(rep.left_end.integral_limit)},
                               {"derivative_limit", limit_name(rep.left_end.derivative_limit)},
                               {"both_vanish", rep.left_end.both_vanish}};
            bonds.push_back(row);
        }
        json samples = json::array();
        for (std::size_t j = 0; j < problem.bonds.size(); ++j) {
            json points = json::array();
            for (int i = 1; i <= kSampleCount; ++i) {
                const double x = problem.bonds[j].length * i / kSampleCount;
                points.push_back({x, sols[j](x)});
            }
            samples.push_back({{"bond_index", static_cast<int>(j) + 1}, {"points", points}});
        }
        emit_json(json{{"command", "verify"},
                       {"kind", kind_name(problem.kind)},
                       {"alpha", problem.alpha},
                       {"grid", {{"n", cfg.grid.n}, {"grading", cfg.grid.grading}}},
                       {"pass", pass},
                       {"bonds", bonds},
                       {"vertex",
                        {{"continuity_gaps", res.continuity_gaps},
                         {"kirchhoff_gap", res.kirchhoff_gap},
                         {"scale", res.scale}}},
                       {"samples", samples}},
                  out);
    } else {
        out << "bond_index,A,p,lambda,c_value,k_value,max_rel_residual\n";
        for (std::size_t j = 0; j < problem.bonds.size(); ++j)
            out << j + 1 << "," << num(sols[j].amplitude) << "," << num(sols[j].exponent) << ","
                << num(problem.bonds[j].lam) << "," << num(c[j]) << "," << num(k[j]) << ","
                << num(reports[j].max_rel_residual) << "\n";
        out << "\nbond_index,x,y\n";
        for (std::size_t j = 0; j < problem.bonds.size(); ++j)
            for (int i = 1; i <= kSampleCount; ++i) {
                const double x = problem.bonds[j].length * i / kSampleCount;
                out << j + 1 << "," << num(x) << "," << num(sols[j](x)) << "\n";
            }
    }
    return pass ? kExitOk : kExitVerification;
}

// --- sweep ------------------------------------------------------------------

struct SweepSpec {
    std::string key;
    double lo = 0.0, hi = 0.0;
    int count = 0;
};

SweepSpec parse_sweep_spec(const std::string& text) {
    SweepSpec spec;
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = text.find(':', start);
        parts.push_back(text.substr(start, colon == std::string::npos ? std::string::npos
                                                                      : colon - start));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts.size() != 4) throw ParseError("sweep spec must be key:lo:hi:count");
    spec.key = parts[0];
    try {
        spec.lo = std::stod(parts[1]);
        spec.hi = std::stod(parts[2]);
        spec.count = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw ParseError("sweep spec must be key:lo:hi:count with numeric lo, hi, count");
    }
    if (spec.count < 1) throw ParseError("sweep count must be >= 1");
    return spec;
}

/// Applies "alpha" or "bond<k>.<field>" to a copy of the problem.
void apply_sweep_value(StarGraphProblem& problem, const std::string& key, double value) {
    if (key == "alpha") {
        problem.alpha = value;
        return;
    }
    if (key.rfind("bond", 0) == 0) {
        const std::size_t dot = key.find('.');
        if (dot != std::string::npos) {
            const std::string index_text = key.substr(4, dot - 4);
            const std::string field = key.substr(dot + 1);
            std::size_t index = 0;
            try {
                index = static_cast<std::size_t>(std::stoul(index_text));
            } catch (const std::exception&) {
                throw ParseError("sweep key: bad bond index '" + index_text + "'");
            }
            if (index < 1 || index > problem.bonds.size())
                throw ParseError("sweep key: bond index out of range");
            BondSpec& bond = problem.bonds[index - 1];
            if (field == "length") {
                bond.length = value;
            } else if (field == "beta") {
                bond.beta = value;
                if (bond.forcing_nu) bond.forcing_nu = forced_nu(bond, problem.alpha);
            } else if (field == "m") {
                bond.m = value;
                if (bond.forcing_nu) bond.forcing_nu = forced_nu(bond, problem.alpha);
            } else if (field == "lambda") {
                bond.lam = value;
            } else if (field == "b") {
                bond.forcing_b = value;
            } else {
                throw ParseError("sweep key: unknown bond field '" + field + "'");
            }
            return;
        }
    }
    throw ParseError("sweep key must be 'alpha' or 'bond<k>.<field>', got '" + key + "'");
}

struct SweepRow {
    double value = 0.0;
    std::string status;  // ok | invalid | error
    std::string detail;
    std::vector<double> amplitudes;
    double max_continuity_gap_rel = 0.0;
    double kirchhoff_gap_rel = 0.0;
};

SweepRow sweep_one(const StarGraphProblem& base, const std::string& key, double value) {
    SweepRow row;
    row.value = value;
    StarGraphProblem problem = base;
    try {
        apply_sweep_value(problem, key, value);
        for (const Violation& v : validate(problem)) {
            if (v.severity == Severity::Error) {
                row.status = "invalid";
                row.detail = to_string(v);
                return row;
            }
        }
        const std::vector<PowerSolution> sols = build_solutions(problem);
        const std::vector<double> c = continuity_values(problem, sols);
        const std::vector<double> k = kirchhoff_terms(problem, sols);
        for (const PowerSolution& sol : sols) row.amplitudes.push_back(sol.amplitude);

        double c_scale = 0.0, k_scale = 0.0;
        for (double v : c) c_scale = std::max(c_scale, std::fabs(v));
        for (double v : k) k_scale = std::max(k_scale, std::fabs(v));
        double worst = 0.0;
        for (std::size_t j = 1; j < c.size(); ++j)
            worst = std::max(worst, std::fabs(c[j] - c[0]));
        double k_gap = k[0];
        for (std::size_t j = 1; j < k.size(); ++j) k_gap -= k[j];
        row.max_continuity_gap_rel = worst / std::max(c_scale, 1e-300);
        row.kirchhoff_gap_rel = k_gap / std::max(k_scale, 1e-300);
        row.status = "ok";
    } catch (const Error& e) {
        row.status = "error";
        row.detail = e.what();
        row.amplitudes.clear();
    }
    return row;
}

int cmd_sweep(const StarGraphProblem& problem, const RunConfig& cfg, std::ostream& out,
              std::ostream& err) {
    if (int rc = report_violations(problem, err); rc != kExitOk) return rc;
    const SweepSpec spec = parse_sweep_spec(cfg.sweep);

    // structural key problems are parse failures, not per-row ones
    StarGraphProblem scratch = problem;
    apply_sweep_value(scratch, spec.key, spec.lo);

    std::vector<SweepRow> rows;
    rows.reserve(spec.count);
    for (int i = 0; i < spec.count; ++i) {
        const double value =
            spec.count == 1 ? spec.lo
                            : spec.lo + (spec.hi - spec.lo) * i / (spec.count - 1);
        rows.push_back(sweep_one(problem, spec.key, value));
    }

    if (cfg.format == "json") {
        json jrows = json::array();
        for (const SweepRow& row : rows) {
            json r{{"value", row.value}, {"status", row.status}};
            if (!row.detail.empty()) r["detail"] = row.detail;
            if (row.status == "ok") {
                r["amplitudes"] = row.amplitudes;
                r["max_continuity_gap_rel"] = row.max_continuity_gap_rel;
                r["kirchhoff_gap_rel"] = row.kirchhoff_gap_rel;
            }
            jrows.push_back(r);
        }
        emit_json(json{{"command", "sweep"},
                       {"parameter", spec.key},
                       {"count", spec.count},
                       {"rows", jrows}},
                  out);
    } else {
        out << "value,status,max_continuity_gap_rel,kirchhoff_gap_rel";
        for (std::size_t j = 1; j <= problem.bonds.size(); ++j) out << ",A_" << j;
        out << "\n";
        for (const SweepRow& row : rows) {
            out << num(row.value) << "," << row.status << ",";
            if (row.status == "ok")
                out << num(row.max_continuity_gap_rel) << "," << num(row.kirchhoff_gap_rel);
            else
                out << ",";
            for (std::size_t j = 0; j < problem.bonds.size(); ++j) {
                out << ",";
                if (j < row.amplitudes.size()) out << num(row.amplitudes[j]);
            }
            out << "\n";
        }
    }
    return kExitOk;
}

// --- demo-symmetric ----------------------------------------------------------

int cmd_demo_symmetric(std::ostream& out) {
    bool all_pass = true;
    const double alpha = 1.5, beta = 1.0, m = 1.0 / 3.0, length = 1.0, lambda1 = 3.0;

    out << "symmetric star graph, N = 3 bonds: alpha = " << alpha << ", beta = " << beta
        << ", m = 1/3, L = " << length << "\n\n";

    {
        StarGraphProblem problem;
        problem.alpha = alpha;
        problem.kind = ProblemKind::Homogeneous;
        problem.bonds.assign(3, BondSpec{length, beta, m, 1.0, {}, {}});
        problem.bonds[0].lam = lambda1;

        const LambdaAssignment assignment = solve_lambdas_homogeneous(problem, lambda1);
        StarGraphProblem solved = problem;
        for (std::size_t j = 0; j < 3; ++j) solved.bonds[j].lam = assignment.lambdas[j];
        const VertexResiduals res = vertex_residuals(solved);

        const double lhs = assignment.lambdas[0];
        const double rhs = assignment.lambdas[1] + assignment.lambdas[2];
        const bool identity = std::fabs(lhs - rhs) <= 1e-12 * std::fabs(lhs);
        double worst_gap = std::fabs(res.kirchhoff_gap);
        for (double g : res.continuity_gaps) worst_gap = std::max(worst_gap, std::fabs(g));
        const bool gaps_ok = worst_gap <= 1e-12 * std::max(res.scale, 1.0);
        all_pass = all_pass && identity && gaps_ok;

        out << "homogeneous case, lambda_1 = " << lambda1 << ":\n";
        out << "  solved lambda_2 = " << num(assignment.lambdas[1]) << ", lambda_3 = "
            << num(assignment.lambdas[2]) << "\n";
        out << "  lambda1 = lambda2 + lambda3: " << (identity ? "PASS" : "FAIL")
            << " (|lhs - rhs| = " << std::fabs(lhs - rhs) << ")\n";
        out << "  vertex gaps <= 1e-12 x scale: " << (gaps_ok ? "PASS" : "FAIL")
            << " (worst " << worst_gap << ", scale " << res.scale << ")\n\n";
    }

    {
        // Forced case: b_j lambda_j^{1/(m-1)} must match across bonds for the
        // weighted traces to glue, so plant lambda_2 = lambda_3 = lambda_1/2
        // and scale b accordingly.
        const double b1 = 0.4;
        const double planted = lambda1 / 2.0;
        const double b_out = b1 * std::pow(lambda1 / planted, 1.0 / (m - 1.0));

        StarGraphProblem problem;
        problem.alpha = alpha;
        problem.kind = ProblemKind::Forced;
        problem.bonds.assign(3, BondSpec{length, beta, m, 1.0, b_out, {}});
        problem.bonds[0].lam = lambda1;
        problem.bonds[0].forcing_b = b1;
        for (BondSpec& bond : problem.bonds) bond.forcing_nu = forced_nu(bond, alpha);

        const ForcedSolveReport report = solve_vertex_forced(problem, lambda1);
        const double lhs = report.lambdas[0];
        const double rhs = report.lambdas[1] + report.lambdas[2];
        const bool identity = std::fabs(lhs - rhs) <= 1e-9 * std::fabs(lhs);
        const bool solved = report.status == ForcedStatus::Solved;
        all_pass = all_pass && identity && solved;

        out << "forced case, lambda_1 = " << lambda1 << ", b_1 = " << b1 << ":\n";
        out << "  solved lambda_2 = " << num(report.lambdas[1]) << ", lambda_3 = "
            << num(report.lambdas[2]) << "\n";
        out << "  lambda1 = lambda2 + lambda3: " << (identity ? "PASS" : "FAIL")
            << " (|lhs - rhs| = " << std::fabs(lhs - rhs) << ")\n";
        out << "  kirchhoff gap <= 1e-9 x scale: " << (solved ? "PASS" : "FAIL") << " (gap "
            << report.kirchhoff_gap << ", scale " << report.kirchhoff_scale << ")\n\n";
    }

    out << "overall: " << (all_pass ? "PASS" : "FAIL") << "\n";
    return all_pass ? kExitOk : kExitVerification;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact power-law solutions of nonlinear fractional equations on star graphs"};
    app.name("fracstar");
    app.require_subcommand(1);

    RunConfig cfg;
    const auto add_common = [&cfg](CLI::App* cmd, bool needs_problem) {
        auto* problem =
            cmd->add_option("--problem", cfg.problem_path, "problem file path");
        if (needs_problem) problem->required()->check(CLI::ExistingFile);
        cmd->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--grid-n", cfg.grid.n, "verification grid size")
            ->check(CLI::Range(8, 1 << 22));
        cmd->add_option("--grid-grading", cfg.grid.grading, "mesh grading exponent")
            ->check(CLI::Range(1.0, 64.0));
    };

    CLI::App* validate_cmd = app.add_subcommand("validate", "check problem invariants");
    add_common(validate_cmd, true);
    CLI::App* solve_cmd =
        app.add_subcommand("solve", "solve the vertex system and report the solution");
    add_common(solve_cmd, true);
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "numerically certify the built solutions");
    add_common(verify_cmd, true);
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "evaluate across a parameter range");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--sweep", cfg.sweep, "parameter sweep as key:lo:hi:count")
        ->required();
    CLI::App* demo_cmd = app.add_subcommand(
        "demo-symmetric", "reproduce the symmetric-case identity lambda1 = lambda2 + lambda3");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (demo_cmd->parsed()) return cmd_demo_symmetric(out);

        std::vector<std::string> notices;
        const StarGraphProblem problem = load_problem_file(cfg.problem_path, &notices);
        for (const std::string& notice : notices) err << "notice: " << notice << "\n";

        if (validate_cmd->parsed()) return cmd_validate(problem, cfg, out);
        if (solve_cmd->parsed()) return cmd_solve(problem, cfg, out, err);
        if (verify_cmd->parsed()) return cmd_verify(problem, cfg, out, err);
        if (sweep_cmd->parsed()) return cmd_sweep(problem, cfg, out, err);
        err << "no command selected\n";
        return kExitValidation;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        err << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    }
}

}  // namespace fracstar
