#ifndef QFTARITH_TOOLS_CLI_HPP
#define QFTARITH_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace qftarith::cli {

/// Exit codes: 0 success, 1 internal failure, 2 usage or validation error.
enum ExitCode : int { kOk = 0, kInternal = 1, kUsage = 2 };

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qftarith::cli

#endif  // QFTARITH_TOOLS_CLI_HPP
