#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mlqm::cli {

// Exit statuses.
inline constexpr int kExitData = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitEmpty = 2;  // ran successfully, spectrum has no states

/// Parses args (without the program name), runs the command and writes the
/// table to `out` (or to --out). Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlqm::cli
