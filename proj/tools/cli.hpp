#ifndef WPCVI_TOOLS_CLI_HPP
#define WPCVI_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace wpcvi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitDegenerate = 3;

/// Runs one command line (program name excluded) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wpcvi::cli

#endif  // WPCVI_TOOLS_CLI_HPP
