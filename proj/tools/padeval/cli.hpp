#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace padeval::cli {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kUsage = 2,
  kIo = 3,
  kManifest = 4,
  kMetrics = 5,
  kEvaluation = 6,
  kStore = 7,
  kRender = 8,
};

/// Runs one command. args[0] is the program name. Diagnostics go to `err`
/// as a single line; normal output to `out`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace padeval::cli
