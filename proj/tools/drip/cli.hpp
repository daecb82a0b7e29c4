#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace drip::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kFindings = 1;   // analyze: leaks found
inline constexpr int kInputError = 2;
inline constexpr int kInvalidFix = 3; // fix or validate: validation failed
inline constexpr int kBudget = 4;    // oracle enumeration cap reached

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace drip::cli
