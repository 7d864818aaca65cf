#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hybridgrid::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

// Runs one command line (without the program name). Data and requested
// reports go to `out`, diagnostics to `err`.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hybridgrid::cli
