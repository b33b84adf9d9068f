#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracstar/cli_app.hpp"
#include "fracstar/errors.hpp"
#include "fracstar/problem_io.hpp"

using namespace fracstar;
using nlohmann::json;

namespace {

const char* kSymmetricFile =
    "# three identical bonds\n"
    "alpha = 1.5\n"
    "kind = homogeneous\n"
    "\n"
    "[bond]\n"
    "length = 1\n"
    "beta = 1\n"
    "m = 0.33333333333333331\n"
    "lambda = 3\n"
    "\n"
    "[bond]\n"
    "length = 1\n"
    "beta = 1\n"
    "m = 0.33333333333333331\n"
    "lambda = 1.5\n"
    "\n"
    "[bond]\n"
    "length = 1\n"
    "beta = 1\n"
    "m = 0.33333333333333331\n"
    "lambda = 1.5\n";

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content) : path(name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

struct CliRun {
    int exit_code = 0;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun result;
    result.exit_code = run_cli(args, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

}  // namespace

TEST_CASE("parse_problem_file reads the minimal symmetric document") {
    const StarGraphProblem problem = parse_problem_file(kSymmetricFile);
    CHECK(problem.alpha == 1.5);
    CHECK(problem.kind == ProblemKind::Homogeneous);
    REQUIRE(problem.bonds.size() == 3);
    CHECK(problem.bonds[0].lam == 3.0);
    CHECK(problem.bonds[1].lam == 1.5);
    CHECK(problem.bonds[0].m == doctest::Approx(1.0 / 3.0));
    CHECK(!problem.bonds[0].forcing_b.has_value());
}

TEST_CASE("parse_problem_file rejects m = 1 with a pointed message") {
    const std::string text =
        "alpha = 1.5\nkind = homogeneous\n[bond]\nlength = 1\nbeta = 1\nm = 1\nlambda = 2\n"
        "[bond]\nlength = 1\nbeta = 1\nm = 0.5\nlambda = 2\n";
    CHECK_THROWS_WITH_AS(parse_problem_file(text), doctest::Contains("m != 1"), ParseError);
}

TEST_CASE("parse_problem_file auto-fills the forced nu with a notice") {
    const std::string text =
        "alpha = 1.5\nkind = forced\n"
        "[bond]\nlength = 1\nbeta = 1\nm = 0.25\nlambda = 2\nb = 0.5\n"
        "[bond]\nlength = 1\nbeta = 1\nm = 0.25\nlambda = 2\nb = 0.5\nnu = 1.8333333333333333\n";
    std::vector<std::string> notices;
    const StarGraphProblem problem = parse_problem_file(text, &notices);
    REQUIRE(problem.bonds[0].forcing_nu.has_value());
    CHECK(*problem.bonds[0].forcing_nu ==
          doctest::Approx((1.0 + 0.25 * 1.5) / 0.75).epsilon(1e-15));
    REQUIRE(notices.size() == 1);
    CHECK(notices[0].find("bond 1") != std::string::npos);
}

TEST_CASE("parse_problem_file diagnostics carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_problem_file("alpha = 1.5\nkind = homogeneous\nwidth = 3\n"),
                         doctest::Contains("line 3"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_problem_file("alpha = 1.5\nalpha = 1.6\nkind = homogeneous\n"),
        doctest::Contains("duplicate"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_problem_file("alpha = 1.5\nkind = homogeneous\n[bond]\nlength = 1\nbeta = 0\n"
                           "m = 0\nlambda = one\n"),
        doctest::Contains("cannot parse number"), ParseError);
    CHECK_THROWS_WITH_AS(parse_problem_file("alpha = 1.5\nkind = maybe\n"),
                         doctest::Contains("kind"), ParseError);
    CHECK_THROWS_WITH_AS(parse_problem_file("length = 1\n"),
                         doctest::Contains("unknown top-level key"), ParseError);
    CHECK_THROWS_WITH_AS(parse_problem_file("alpha = 1.5\nkind = homogeneous\n[edge]\n"),
                         doctest::Contains("unknown section"), ParseError);

    // forcing keys are rejected on homogeneous problems
    CHECK_THROWS_WITH_AS(
        parse_problem_file("alpha = 1.5\nkind = homogeneous\n[bond]\nlength = 1\nbeta = 0\n"
                           "m = 0\nlambda = 1\nb = 1\n[bond]\nlength = 1\nbeta = 0\nm = 0\n"
                           "lambda = 1\n"),
        doctest::Contains("only valid in forced"), ParseError);

    // a missing required key names the bond
    CHECK_THROWS_WITH_AS(
        parse_problem_file("alpha = 1.5\nkind = homogeneous\n[bond]\nlength = 1\nbeta = 0\n"
                           "m = 0\n[bond]\nlength = 1\nbeta = 0\nm = 0\nlambda = 1\n"),
        doctest::Contains("missing key 'lambda'"), ParseError);

    CHECK_THROWS_WITH_AS(parse_problem_file("alpha = 1.5\nkind = homogeneous\n"),
                         doctest::Contains("at least 2"), ParseError);
}

TEST_CASE("problem round-trips through format_problem byte-stably") {
    std::vector<std::string> notices;
    StarGraphProblem problem = parse_problem_file(kSymmetricFile);
    problem.alpha = 1.0 + 1.0 / 3.0;  // awkward decimals on purpose
    problem.bonds[2].lam = 0.1;

    const std::string first = format_problem(problem);
    const StarGraphProblem reparsed = parse_problem_file(first, &notices);
    CHECK(reparsed == problem);
    CHECK(format_problem(reparsed) == first);
    CHECK(notices.empty());

    StarGraphProblem forced = problem;
    forced.kind = ProblemKind::Forced;
    for (BondSpec& bond : forced.bonds) {
        bond.m = 0.25;
        bond.forcing_b = 0.7;
        bond.forcing_nu = forced_nu(bond, forced.alpha);
    }
    CHECK(parse_problem_file(format_problem(forced)) == forced);
}

TEST_CASE("cli validate: clean problem exits 0, bad alpha exits 2") {
    TempFile good("cli_good.problem", kSymmetricFile);
    const CliRun ok = run({"validate", "--problem", good.path});
    CHECK(ok.exit_code == 0);
    const json doc = json::parse(ok.out);
    CHECK(doc["error_count"] == 0);

    TempFile bad("cli_bad.problem",
                 std::string("alpha = 2.5\nkind = homogeneous\n") +
                     "[bond]\nlength = 1\nbeta = 1\nm = 0.25\nlambda = 1\n"
                     "[bond]\nlength = 1\nbeta = 1\nm = 0.25\nlambda = 1\n");
    const CliRun fail = run({"validate", "--problem", bad.path});
    CHECK(fail.exit_code == 2);
    const json fail_doc = json::parse(fail.out);
    CHECK(fail_doc["error_count"] == 1);
    CHECK(fail_doc["violations"][0]["constraint"] == "alpha out of (1,2)");
}

TEST_CASE("cli solve emits the symmetric lambda split") {
    TempFile file("cli_solve.problem", kSymmetricFile);
    const CliRun result = run({"solve", "--problem", file.path});
    REQUIRE(result.exit_code == 0);
    const json doc = json::parse(result.out);
    CHECK(doc["status"] == "solved");
    CHECK(std::fabs(doc["bonds"][1]["lambda"].get<double>() - 1.5) < 1e-12);
    CHECK(std::fabs(doc["bonds"][2]["lambda"].get<double>() - 1.5) < 1e-12);
    CHECK(std::fabs(doc["vertex"]["kirchhoff_gap"].get<double>()) < 1e-12);

    const CliRun csv = run({"solve", "--problem", file.path, "--format", "csv"});
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.out.rfind("bond_index,A,p,lambda,c_value,k_value,max_rel_residual\n", 0) == 0);
}

TEST_CASE("cli solve reports incompatible lengths as a solver failure") {
    std::string text = kSymmetricFile;
    const std::size_t last_length = text.rfind("length = 1");
    text.replace(last_length, 10, "length = 2");
    TempFile file("cli_incompatible.problem", text);
    const CliRun result = run({"solve", "--problem", file.path});
    CHECK(result.exit_code == 3);
    CHECK(result.err.find("continuity chain broken") != std::string::npos);
}

TEST_CASE("cli verify certifies the symmetric solution") {
    TempFile file("cli_verify.problem", kSymmetricFile);
    const CliRun result = run({"verify", "--problem", file.path});
    REQUIRE(result.exit_code == 0);
    const json doc = json::parse(result.out);
    CHECK(doc["pass"] == true);
    for (const json& bond : doc["bonds"]) {
        CHECK(bond["max_rel_residual"].get<double>() <= 1e-3);
        CHECK(bond["left_end"]["both_vanish"] == true);
        CHECK(bond["check_points"].size() == 16);
    }
    CHECK(doc["samples"].size() == 3);
    CHECK(doc["samples"][0]["points"].size() == 32);

    // plot table rides along in csv format
    const CliRun csv = run({"verify", "--problem", file.path, "--format", "csv"});
    CHECK(csv.out.find("\nbond_index,x,y\n") != std::string::npos);
}

TEST_CASE("cli sweep produces one row per value") {
    TempFile file("cli_sweep.problem", kSymmetricFile);
    const CliRun result =
        run({"sweep", "--problem", file.path, "--sweep", "alpha:1.3:1.7:5"});
    REQUIRE(result.exit_code == 0);
    const json doc = json::parse(result.out);
    CHECK(doc["parameter"] == "alpha");
    REQUIRE(doc["rows"].size() == 5);
    for (const json& row : doc["rows"]) {
        CHECK(row["status"] == "ok");
        CHECK(row["amplitudes"].size() == 3);
    }
    CHECK(doc["rows"][0]["value"] == doctest::Approx(1.3));
    CHECK(doc["rows"][4]["value"] == doctest::Approx(1.7));

    // an out-of-range bond index is a parse-level failure
    const CliRun bad =
        run({"sweep", "--problem", file.path, "--sweep", "bond9.lambda:1:2:3"});
    CHECK(bad.exit_code == 2);
}

TEST_CASE("cli demo-symmetric prints the identity check") {
    const CliRun result = run({"demo-symmetric"});
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("lambda1 = lambda2 + lambda3: PASS") != std::string::npos);
    CHECK(result.out.find("overall: PASS") != std::string::npos);
}

TEST_CASE("cli output is byte-deterministic") {
    TempFile file("cli_determinism.problem", kSymmetricFile);
    const CliRun first = run({"solve", "--problem", file.path});
    const CliRun second = run({"solve", "--problem", file.path});
    CHECK(first.out == second.out);
    CHECK(first.exit_code == second.exit_code);

    const CliRun demo1 = run({"demo-symmetric"});
    const CliRun demo2 = run({"demo-symmetric"});
    CHECK(demo1.out == demo2.out);
}

TEST_CASE("cli usage errors do not masquerade as solver results") {
    const CliRun missing = run({"solve"});
    CHECK(missing.exit_code != 0);

    const CliRun nofile = run({"solve", "--problem", "does_not_exist.problem"});
    CHECK(nofile.exit_code != 0);

    const CliRun help = run({"--help"});
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("demo-symmetric") != std::string::npos);
}
