#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracstar {

/// Entry point of the fracstar tool. args excludes the program name.
/// Data is written to out, diagnostics to err. Exit codes: 0 success,
/// 2 validation or parse errors, 3 solver failure, 4 verification failure.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fracstar
