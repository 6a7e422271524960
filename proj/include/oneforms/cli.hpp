#pragma once

#include <iosfwd>

namespace oneforms::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kRank = 2,         // RankDeficient / NotSPD
  kDomain = 3,       // BeyondBlowup
  kNoConvergence = 4,
  kVerifyFailed = 5, // submersion-verify found a failing invariant
};

/// Runs the tool with the given arguments; diagnostics go to err as JSON.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oneforms::cli
