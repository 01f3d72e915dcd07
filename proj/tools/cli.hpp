#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qrfcomm::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kSuccess = 0, kUsageError = 2, kNumericalError = 3 };

/// Parses argv, runs one subcommand and writes the artifact to --out (or to
/// `out` when --out is absent or "-"). Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qrfcomm::cli
