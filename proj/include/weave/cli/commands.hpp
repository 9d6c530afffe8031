#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace weave::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;     // unreadable or invalid input, bad flags
inline constexpr int kExitPipeline = 2;  // execution, synthesis or refinement failure

/// Entry point of the `weave` tool. Writes results to `out` and diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with arguments after the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace weave::cli
