#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace liouville {

enum ExitCode : int { exit_ok = 0, exit_verdict = 1, exit_usage = 2, exit_numerical = 3 };

/**
 * Runs one subcommand. args excludes the program name. Data goes to out
 * (or to --out PATH, written atomically), diagnostics to err.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace liouville
