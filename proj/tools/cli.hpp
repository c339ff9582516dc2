#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hornfree::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitGateFailed = 2;

/// Runs the command line `args` (without the program name). Payloads go to
/// `out` unless --out names a file; diagnostics and usage go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hornfree::cli
