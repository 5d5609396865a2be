#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace rmf::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kConstraint = 3 };

// Runs one subcommand. `args` excludes the program name. Reports go to `out`
// (or to --out PATH), diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

// "4.2e-46" style rendering of 10^log10_value.
std::string format_log10(double log10_value);

}  // namespace rmf::cli
