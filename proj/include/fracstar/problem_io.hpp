#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fracstar/model.hpp"

namespace fracstar {

/// Parses the sectioned key/value problem document:
///   alpha = <real>            kind = homogeneous | forced
///   [bond]                    (repeated, >= 2)
///     length, beta, m, lambda, and for forced problems b plus optional nu.
/// '#' starts a comment. Unknown or duplicate keys are rejected with line
/// numbers. A forced bond without nu gets it auto-filled from
/// (beta + m alpha)/(1 - m); the fill is reported through notices.
StarGraphProblem parse_problem_file(std::string_view text,
                                    std::vector<std::string>* notices = nullptr);

/// Canonical emission; parse_problem_file(format_problem(p)) reproduces p
/// field for field.
std::string format_problem(const StarGraphProblem& problem);

/// Reads and parses a problem file from disk.
StarGraphProblem load_problem_file(const std::string& path,
                                   std::vector<std::string>* notices = nullptr);

}  // namespace fracstar
