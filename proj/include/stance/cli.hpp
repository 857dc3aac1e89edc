#pragma once

#include <iosfwd>

namespace stance::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParseError = 2,
  kEmptyAfterFilter = 3,
  kWriteError = 4,
  kServeError = 5,
};

/// Entry point shared by the stancectl binary and the tests.
///
///   stancectl build --input F [--format csv|jsonl] --dataset motivating|demotivating
///                   [--min-count 20] --output F
///   stancectl serve --snapshot F [--snapshot F ...] [--listen host:port] [--static DIR]
///
/// serve also reads STANCE_LISTEN and STANCE_SNAPSHOTS (comma-separated).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stance::cli
