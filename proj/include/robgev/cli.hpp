#pragma once

#include <iosfwd>

#include "robgev/error.hpp"

namespace robgev::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;

/// Version of the JSON documents emitted with --format json.
inline constexpr int kSchemaVersion = 1;

int exit_code(ErrorKind kind) noexcept;

/// Runs the tool as if invoked with argv. Machine-readable output goes to
/// `out`; diagnostics, warnings and errors go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace robgev::cli
