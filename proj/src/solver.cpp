#include "limcyc/solver.hpp"

#include "limcyc/errors.hpp"

#include <cmath>
#include <limits>

namespace limcyc {

namespace {

bool lu_is_singular(const Eigen::PartialPivLU<Matrix>& lu) {
    const auto diag = lu.matrixLU().diagonal().cwiseAbs();
    if (!diag.allFinite()) {
        return true;
    }
    const double largest = diag.maxCoeff();
    const double floor = largest * static_cast<double>(diag.size()) *
                         std::numeric_limits<double>::epsilon();
    return !(largest > 0.0) || diag.minCoeff() <= floor;
}

}  // namespace

double inf_norm(const Vector& v) noexcept {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

void NewtonConfig::validate() const {
    if (tol_residual && !(*tol_residual > 0.0)) {
        throw InvalidArgument("tol_residual must be positive");
    }
    if (max_iterations < 0) {
        throw InvalidArgument("max_iterations must be nonnegative");
    }
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
        throw InvalidArgument("backtrack_factor must lie in (0, 1)");
    }
    if (!(min_step_fraction > 0.0)) {
        throw InvalidArgument("min_step_fraction must be positive");
    }
}

SolveResult newton_solve(const CollocationProblem& problem, const FlatState& x0,
                         const NewtonConfig& config) {
    config.validate();

    SolveResult result;
    result.x = x0;
    FlatState r = residual(problem, result.x);
    double norm = inf_norm(r.values());

    result.tol_residual = config.tol_residual
                              ? *config.tol_residual
                              : 1e-10 * (1.0 + inf_norm(evaluate_rhs(problem, x0).values()));
    result.step_history.push_back({0, norm, 0.0});

    int iteration = 0;
    while (!(norm <= result.tol_residual) && iteration < config.max_iterations) {
        const Eigen::PartialPivLU<Matrix> lu(jacobian(problem, result.x));
        if (lu_is_singular(lu)) {
            throw SingularJacobianError(iteration + 1);
        }
        const Vector delta = lu.solve(-r.values());

        double lambda = 1.0;
        bool accepted = false;
        FlatState trial;
        FlatState trial_r;
        double trial_norm = norm;
        while (lambda >= config.min_step_fraction) {
            trial = FlatState(result.x.values() + lambda * delta, problem.dim(), problem.nodes());
            try {
                trial_r = residual(problem, trial);
                trial_norm = inf_norm(trial_r.values());
            } catch (const EvaluationError&) {
                trial_norm = std::numeric_limits<double>::infinity();
            }
            if (trial_norm < norm) {
                accepted = true;
                break;
            }
            lambda *= config.backtrack_factor;
        }
        if (!accepted) {
            break;
        }

        ++iteration;
        result.x = std::move(trial);
        r = std::move(trial_r);
        norm = trial_norm;
        result.step_history.push_back({iteration, norm, lambda});
    }

    result.iterations = iteration;
    result.residual_norm = norm;
    result.converged = norm <= result.tol_residual;
    return result;
}

}  // namespace limcyc
