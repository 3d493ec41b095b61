#include <catch2/catch_amalgamated.hpp>

#include "limcyc/errors.hpp"
#include "limcyc/models.hpp"
#include "limcyc/solver.hpp"
#include "limcyc/warmstart.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace limcyc;
using limcyc::testing::max_abs;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

FlatState pendulum_seed(const NodeGrid& g, double center, double eps, int harmonic, double omega) {
    FlatState x(2, g.size());
    for (int j = 0; j < g.size(); ++j) {
        x(0, j) = center + eps * std::sin(harmonic * g[j]);
        x(1, j) = eps * omega * harmonic * std::cos(harmonic * g[j]);
    }
    return x;
}

}  // namespace

TEST_CASE("linear model converges in one Newton step", "[solver][linear]") {
    for (int n : {3, 5, 11, 31, 101}) {
        const double p = 1.5;
        const CollocationProblem problem(linear_system(p), n);
        const SolveResult res = newton_solve(problem, FlatState(1, n));
        REQUIRE(res.converged);
        CHECK(res.iterations == 1);
        REQUIRE(res.step_history.size() == 2);
        CHECK(res.step_history[1].damping == 1.0);
        for (int j = 0; j < n; ++j) {
            const double t = problem.grid()[j];
            CHECK(res.x(0, j) == Approx(0.5 * p * (std::cos(t) + std::sin(t))).margin(1e-12));
        }
    }
}

TEST_CASE("default tolerance scales with the initial rhs", "[solver][tolerance]") {
    const CollocationProblem problem(linear_system(3.0), 7);
    const SolveResult res = newton_solve(problem, FlatState(1, 7));
    // F(0) = 3 cos(t_j), largest in magnitude at t = pi.
    CHECK(res.tol_residual == Approx(1e-10 * (1.0 + 3.0)).epsilon(1e-14));

    NewtonConfig cfg;
    cfg.tol_residual = 1e-3;
    CHECK(newton_solve(problem, FlatState(1, 7), cfg).tol_residual == 1e-3);
}

TEST_CASE("starting at a solution takes no iterations", "[solver][rerun]") {
    const CollocationProblem problem(linear_system(1.0), 9);
    const SolveResult first = newton_solve(problem, FlatState(1, 9));
    const SolveResult again = newton_solve(problem, first.x);
    CHECK(again.converged);
    CHECK(again.iterations == 0);
    CHECK(again.x.values() == first.x.values());
}

TEST_CASE("inverted pendulum is an exact solution", "[solver][pendulum]") {
    const CollocationProblem problem(pendulum_system({0.1, 120.0, 17.5}), 101);
    const FlatState x = guess_near_pi(problem.grid(), 0.0, 1, 17.5);
    CHECK(max_abs(residual(problem, x).values()) == 0.0);
    const SolveResult res = newton_solve(problem, x);
    CHECK(res.converged);
    CHECK(res.iterations == 0);
    CHECK(res.residual_norm == 0.0);
}

TEST_CASE("solves are deterministic", "[solver][determinism]") {
    const CollocationProblem problem(pendulum_system({0.1, 100.0, 17.5}), 51);
    const FlatState seed = pendulum_seed(problem.grid(), kPi - 1.0, 1.5, 2, 17.5);
    const SolveResult a = newton_solve(problem, seed);
    const SolveResult b = newton_solve(problem, seed);
    CHECK(a.iterations == b.iterations);
    CHECK(a.x.values() == b.x.values());
    CHECK(a.residual_norm == b.residual_norm);
}

TEST_CASE("pendulum cycle agrees with direct integration", "[solver][pendulum][oracle]") {
    // Integrate one forcing period from the collocation state at t = pi with a
    // fine RK4 step and compare with the collocation values at every node.
    const PeriodicSystem sys = pendulum_system({0.1, 100.0, 17.5});
    const CollocationProblem problem(sys, 101);
    const SolveResult res =
        newton_solve(problem, pendulum_seed(problem.grid(), kPi - 1.0, 1.5, 2, 17.5));
    REQUIRE(res.converged);
    const double swing = res.x.component(0).maxCoeff() - res.x.component(0).minCoeff();
    CHECK(swing > 0.1);

    TransientConfig tc;
    tc.cycles = 1;
    tc.steps_per_cycle = 101 * 64;
    tc.initial_state = res.x.at_node(100);
    const TransientResult tr = rk4_transient(sys, problem.grid(), tc);
    CHECK(max_abs(tr.samples.values() - res.x.values()) <= 1e-6);
}

TEST_CASE("iteration limit reports non-convergence", "[solver][limits]") {
    const CollocationProblem problem(pendulum_system({0.1, 100.0, 17.5}), 51);
    NewtonConfig cfg;
    cfg.max_iterations = 1;
    const SolveResult res =
        newton_solve(problem, pendulum_seed(problem.grid(), kPi - 1.0, 1.5, 2, 17.5), cfg);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 1);
    CHECK(res.residual_norm > res.tol_residual);

    cfg.max_iterations = 0;
    const SolveResult none = newton_solve(problem, FlatState(2, 51), cfg);
    CHECK(none.iterations == 0);
}

TEST_CASE("accepted steps decrease the residual", "[solver][property]") {
    const CollocationProblem problem(pendulum_system({0.1, 150.0, 17.5}), 51);
    const SolveResult res =
        newton_solve(problem, pendulum_seed(problem.grid(), kPi - 1.0, 1.5, 2, 17.5));
    for (std::size_t i = 1; i < res.step_history.size(); ++i) {
        CHECK(res.step_history[i].residual_norm < res.step_history[i - 1].residual_norm);
        CHECK(res.step_history[i].damping > 0.0);
        CHECK(res.step_history[i].damping <= 1.0);
    }
}

TEST_CASE("line search backs off from failing trial points", "[solver][damping]") {
    // omega x' = 1 - exp(x) is solved by x = 0. From x = -3 the full Newton step
    // lands near x = 16, where the rhs refuses to evaluate.
    PeriodicSystem s;
    s.dim = 1;
    s.omega = 1.0;
    s.rhs = [](const Vector& x, double) -> Vector {
        if (x(0) > 10.0) {
            throw std::overflow_error("out of range");
        }
        return Vector::Constant(1, 1.0 - std::exp(x(0)));
    };
    s.jac = [](const Vector& x, double) -> Matrix { return Matrix::Constant(1, 1, -std::exp(x(0))); };
    const CollocationProblem problem(s, 5);
    const SolveResult res = newton_solve(problem, constant_guess(Vector::Constant(1, -3.0), 5));
    REQUIRE(res.converged);
    CHECK(res.step_history[1].damping < 1.0);
    CHECK(max_abs(res.x.values()) <= 1e-9);
}

TEST_CASE("singular Jacobian is reported with its iteration", "[solver][errors]") {
    // f = 0 leaves only omega D, which annihilates constants.
    PeriodicSystem s;
    s.dim = 1;
    s.rhs = [](const Vector& x, double) -> Vector { return Vector::Zero(x.size()); };
    const CollocationProblem problem(s, 7);
    FlatState x(1, 7);
    for (int j = 0; j < 7; ++j) {
        x(0, j) = std::sin(problem.grid()[j]);
    }
    try {
        (void)newton_solve(problem, x);
        FAIL("expected SingularJacobianError");
    } catch (const SingularJacobianError& e) {
        CHECK(e.iteration() == 1);
    }
}

TEST_CASE("invalid Newton configuration", "[solver][validate]") {
    const CollocationProblem problem(linear_system(1.0), 3);
    NewtonConfig cfg;
    cfg.tol_residual = 0.0;
    CHECK_THROWS_AS(newton_solve(problem, FlatState(1, 3), cfg), InvalidArgument);
    cfg = {};
    cfg.backtrack_factor = 1.0;
    CHECK_THROWS_AS(newton_solve(problem, FlatState(1, 3), cfg), InvalidArgument);
    cfg = {};
    cfg.max_iterations = -1;
    CHECK_THROWS_AS(newton_solve(problem, FlatState(1, 3), cfg), InvalidArgument);
    CHECK_THROWS_AS(newton_solve(problem, FlatState(1, 5)), ShapeError);
}
