#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zipshoe::cli {

/// Exit codes: 0 all checks pass, 1 verification or numeric failure,
/// 2 usage, configuration or I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zipshoe::cli
