// Command-line front end.  run() parses and executes one invocation and
// returns the process exit code:
//
//   0  success
//   1  invalid input (bad flags, malformed files, violated model invariants);
//      the diagnostic on stderr names what was violated
//   2  numerical non-convergence, reported as an error only under --strict
//
// Subcommands: eval, moments, residues, classify, telescope, counterexample,
// report.  See --help for flags.

#pragma once

#include <string>
#include <vector>

namespace loewner::cli {

int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace loewner::cli
