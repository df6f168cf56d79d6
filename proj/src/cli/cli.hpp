#ifndef TRUNCMAP_CLI_CLI_HPP
#define TRUNCMAP_CLI_CLI_HPP

#include <ostream>

namespace truncmap::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageOrUnexpected = 1,
  kConfigError = 2,
  kDataError = 3,
  kEvaluationError = 4,
};

/// Entry point of the `truncmap` tool: parses argv, runs one subcommand and
/// maps library errors onto exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace truncmap::cli

#endif  // TRUNCMAP_CLI_CLI_HPP
