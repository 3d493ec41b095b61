#pragma once

#include "limcyc/system.hpp"

#include <optional>
#include <vector>

namespace limcyc {

struct NewtonConfig {
    /// Infinity-norm threshold on R(X). Unset: 1e-10 * (1 + ||F(X0)||_inf).
    std::optional<double> tol_residual;
    int max_iterations = 50;
    double backtrack_factor = 0.5;
    double min_step_fraction = 0x1p-20;

    void validate() const;
};

struct NewtonStep {
    int iteration = 0;
    double residual_norm = 0.0;
    double damping = 0.0;  // 0 for the initial evaluation
};

struct SolveResult {
    FlatState x;
    double residual_norm = 0.0;
    double tol_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<NewtonStep> step_history;
};

/// Damped Newton on R(X) = 0 with dense partial-pivot LU and step halving.
/// Non-convergence is reported in the result; a singular Jacobian throws
/// SingularJacobianError.
[[nodiscard]] SolveResult newton_solve(const CollocationProblem& problem, const FlatState& x0,
                                       const NewtonConfig& config = {});

[[nodiscard]] double inf_norm(const Vector& v) noexcept;

}  // namespace limcyc
