#pragma once
/**
 * @file cli.hpp
 * @brief Command-line front end: invariants, verify, classify, obstruction,
 * integrate, catalog.
 *
 * Exit status: 0 when every check passes, 1 when a check fails, 2 for usage,
 * configuration or input errors (unknown surface, unreadable or unwritable
 * file, unknown config key).
 */

#include <ostream>

namespace mobius::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv and runs one subcommand, writing reports to `out` (or the
/// --out file) and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mobius::cli
