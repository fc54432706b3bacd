// Command-line front end. Exit codes: 0 success, 2 parse or argument error,
// 3 domain/orientation/convexity error, 4 hypotheses failed, 5 bound violated.

#ifndef AFFC_TOOLS_CLI_HPP
#define AFFC_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace affc::cli {

enum ExitCode { ok = 0, failure = 1, parse = 2, domain = 3, hypotheses = 4, violated = 5 };

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace affc::cli

#endif  // AFFC_TOOLS_CLI_HPP
