#pragma once

#include "run_config.hpp"

#include <iosfwd>

namespace limcyc::cli {

/// Exit codes shared by every command.
enum ExitCode : int { kConverged = 0, kNotConverged = 1, kInvalidInput = 2 };

/// Writes one row per node: t, tau, x1..xm (and i_d, V0 for the circuit).
int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Continuation over cfg.sweep; rows p, component, max, min, iterations, converged.
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Dense resampling of a stored solution on cfg.points phases.
int cmd_interp(std::istream& solution, const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// RK4 transient trajectory.
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Differentiation matrix dump, one row per node.
int cmd_matrix(const RunConfig& cfg, std::ostream& out, std::ostream& log);

}  // namespace limcyc::cli
