#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sip::cli {

enum ExitCode : int {
  ok = 0,
  invalid_input = 1,
  infeasible = 2,
  verification_failed = 3,
  counterexample = 4,
  not_converged = 5,
};

/// Runs sip-interp with args (without the program name). Reports go to out
/// unless --output is given; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace sip::cli
