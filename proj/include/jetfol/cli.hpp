#pragma once

// Command layer.  Every command is driven by a JSON config (the parsed command
// line with input files inlined), so an emitted certificate can be replayed
// from its own "config" field.

#include <iosfwd>
#include <string>

#include "jetfol/io.hpp"

namespace jetfol {

inline constexpr const char* kToolVersion = JETFOL_VERSION;

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitInconclusive = 2, kExitInput = 3, kExitGuard = 4 };

struct CommandOutput {
  json result;
  int status = kExitOk;
};

/// Runs one command from its config; `jobs` only affects speed.
CommandOutput run_command(const json& config, int jobs);

/// {"tool", "version", "rng", "generated_at", "config", "result"}.
json envelope(const json& config, const json& result);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jetfol
