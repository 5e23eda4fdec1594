#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flatcolor {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIoError = 1;
inline constexpr int kExitRejected = 2;

/// Entry point of the command-line tool; `args` excludes the program name.
/// Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flatcolor
