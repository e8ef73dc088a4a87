#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace causal {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitError = 2;
inline constexpr int kExitUsage = 64;

// Runs one command line (without the program name). Returns the exit code.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causal
