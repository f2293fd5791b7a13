// Command-line front end: optimize / dilate / decompose / simulate / table1.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace multirail {

// Parses argv and runs one subcommand, writing reports to `out` and
// diagnostics to `err`. Exit codes: 0 success, 2 validation error,
// 3 infeasible problem, 4 I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

int run_cli(int argc, const char* const* argv);

}  // namespace multirail
