// SPDX-License-Identifier: Apache-2.0
#ifndef FOLIAGE_LINK_CLI_HPP
#define FOLIAGE_LINK_CLI_HPP

#include <iosfwd>
#include <span>
#include <string>

namespace foliage_link::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Results go to `out`
/// unless --out names a file; diagnostics go to `err`.
///
/// Exit codes: 0 on success, 1 when the model or a solver rejects the
/// request, 2 for malformed flag sets.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace foliage_link::cli

#endif  // FOLIAGE_LINK_CLI_HPP
