#include "fracstar/problem_io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "fracstar/errors.hpp"

namespace fracstar {
namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    std::ostringstream msg;
    msg << "line " << line << ": " << what;
    throw ParseError(msg.str());
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view value, int line) {
    const std::string buf(value);
    char* end = nullptr;
    const double parsed = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || buf.empty())
        fail(line, "cannot parse number '" + buf + "'");
    return parsed;
}

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct PendingBond {
    std::map<std::string, std::pair<double, int>> values;  // key -> (value, line)
    int start_line = 0;
};

BondSpec finish_bond(const PendingBond& pending, ProblemKind kind, double alpha,
                     std::size_t index, std::vector<std::string>* notices) {
    const auto take = [&](const char* key) -> double {
        const auto it = pending.values.find(key);
        if (it == pending.values.end())
            fail(pending.start_line,
                 "bond " + std::to_string(index) + " is missing key '" + key + "'");
        return it->second.first;
    };

    BondSpec bond;
    bond.length = take("length");
    bond.beta = take("beta");
    bond.m = take("m");
    bond.lam = take("lambda");

    if (bond.m == 1.0) fail(pending.values.at("m").second, "m != 1 is required");

    const bool has_b = pending.values.count("b") != 0;
    const bool has_nu = pending.values.count("nu") != 0;
    if (kind == ProblemKind::Forced) {
        if (!has_b)
            fail(pending.start_line,
                 "bond " + std::to_string(index) + ": forced problems require key 'b'");
        bond.forcing_b = pending.values.at("b").first;
        if (has_nu) {
            bond.forcing_nu = pending.values.at("nu").first;
        } else {
            bond.forcing_nu = forced_nu(bond, alpha);
            if (notices) {
                std::ostringstream note;
                note << "bond " << index << ": nu omitted, filled with (beta + m alpha)/(1 - m) = "
                     << fmt_full(*bond.forcing_nu);
                notices->push_back(note.str());
            }
        }
    } else {
        if (has_b) fail(pending.values.at("b").second, "key 'b' is only valid in forced problems");
        if (has_nu)
            fail(pending.values.at("nu").second, "key 'nu' is only valid in forced problems");
    }
    return bond;
}

}  // namespace

StarGraphProblem parse_problem_file(std::string_view text, std::vector<std::string>* notices) {
    StarGraphProblem problem;
    bool have_alpha = false, have_kind = false;
    bool in_bond = false;
    PendingBond pending;
    std::vector<PendingBond> bonds;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line != "[bond]") fail(line_no, "unknown section '" + std::string(line) + "'");
            if (in_bond) bonds.push_back(pending);
            pending = PendingBond{{}, line_no};
            in_bond = true;
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));

        if (!in_bond) {
            if (key == "alpha") {
                if (have_alpha) fail(line_no, "duplicate key 'alpha'");
                problem.alpha = parse_number(value, line_no);
                have_alpha = true;
            } else if (key == "kind") {
                if (have_kind) fail(line_no, "duplicate key 'kind'");
                if (value == "homogeneous")
                    problem.kind = ProblemKind::Homogeneous;
                else if (value == "forced")
                    problem.kind = ProblemKind::Forced;
                else
                    fail(line_no, "kind must be 'homogeneous' or 'forced', got '" +
                                      std::string(value) + "'");
                have_kind = true;
            } else {
                fail(line_no, "unknown top-level key '" + key + "'");
            }
            continue;
        }

        if (key != "length" && key != "beta" && key != "m" && key != "lambda" && key != "b" &&
            key != "nu")
            fail(line_no, "unknown bond key '" + key + "'");
        if (pending.values.count(key)) fail(line_no, "duplicate bond key '" + key + "'");
        pending.values[key] = {parse_number(value, line_no), line_no};
    }
    if (in_bond) bonds.push_back(pending);

    if (!have_alpha) fail(line_no, "missing top-level key 'alpha'");
    if (!have_kind) fail(line_no, "missing top-level key 'kind'");
    if (bonds.size() < 2)
        fail(line_no, "a star graph needs at least 2 [bond] sections, got " +
                          std::to_string(bonds.size()));

    for (std::size_t i = 0; i < bonds.size(); ++i)
        problem.bonds.push_back(
            finish_bond(bonds[i], problem.kind, problem.alpha, i + 1, notices));
    return problem;
}

std::string format_problem(const StarGraphProblem& problem) {
    std::ostringstream out;
    out << "alpha = " << fmt_full(problem.alpha) << "\n";
    out << "kind = " << (problem.kind == ProblemKind::Forced ? "forced" : "homogeneous") << "\n";
    for (const BondSpec& bond : problem.bonds) {
        out << "\n[bond]\n";
        out << "length = " << fmt_full(bond.length) << "\n";
        out << "beta = " << fmt_full(bond.beta) << "\n";
        out << "m = " << fmt_full(bond.m) << "\n";
        out << "lambda = " << fmt_full(bond.lam) << "\n";
        if (bond.forcing_b) out << "b = " << fmt_full(*bond.forcing_b) << "\n";
        if (bond.forcing_nu) out << "nu = " << fmt_full(*bond.forcing_nu) << "\n";
    }
    return out.str();
}

StarGraphProblem load_problem_file(const std::string& path, std::vector<std::string>* notices) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_file(buf.str(), notices);
}

}  // namespace fracstar
