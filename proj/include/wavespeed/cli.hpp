#ifndef WAVESPEED_CLI_HPP
#define WAVESPEED_CLI_HPP

#include <iosfwd>

namespace wavespeed {

/// Exit statuses of the command-line front end.
namespace exit_code {
inline constexpr int kNegative = 0;
inline constexpr int kPositive = 1;
inline constexpr int kInconclusive = 2;
inline constexpr int kNotConverged = 3;
inline constexpr int kNoCandidate = 4;
inline constexpr int kFailure = 70;
inline constexpr int kUsage = 64;
}  // namespace exit_code

/// Entry point of the `wavespeed` tool: subcommands classify, speed,
/// certify, scan and profile. Reports go to `out`, errors to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wavespeed

#endif  // WAVESPEED_CLI_HPP
