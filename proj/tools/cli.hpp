#pragma once

#include <iosfwd>

namespace heatosc::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kArgumentError = 2;
inline constexpr int kNumericalError = 3;

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "HEATOSC_OUTPUT_DIR";

/// Runs one command; artifacts go to files or `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace heatosc::cli
