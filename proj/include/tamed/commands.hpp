#pragma once

#include <iosfwd>

#include "tamed/run_config.hpp"

namespace tamed {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitDivergence = 2;
inline constexpr int kExitKsRejected = 3;

/// Fills defaults, validates and dispatches on cfg.command. Every failure is
/// reported on err and mapped to an exit code; nothing propagates.
int run_command(RunConfig cfg, std::ostream& out, std::ostream& err);

// The cmd_* functions expect a resolved, validated config and may throw.
int cmd_converge(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_evolve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_distribution(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace tamed
