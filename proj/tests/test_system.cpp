#include <catch2/catch_amalgamated.hpp>

#include "limcyc/errors.hpp"
#include "limcyc/models.hpp"
#include "limcyc/system.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace limcyc;
using limcyc::testing::max_abs;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Steady response of x' = -x + p cos(t): x = p (cos t + sin t) / 2.
FlatState linear_exact(const NodeGrid& g, double p) {
    FlatState x(1, g.size());
    for (int j = 0; j < g.size(); ++j) {
        x(0, j) = 0.5 * p * (std::cos(g[j]) + std::sin(g[j]));
    }
    return x;
}

PeriodicSystem without_jacobian(PeriodicSystem s) {
    s.jac = nullptr;
    return s;
}

FlatState random_state(int dim, int nodes, std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    FlatState x(dim, nodes);
    for (Eigen::Index i = 0; i < x.values().size(); ++i) {
        x.values()(i) = u(rng);
    }
    return x;
}

double rel_inf_diff(const Matrix& a, const Matrix& b) {
    const double scale = std::max(1.0, b.cwiseAbs().rowwise().sum().maxCoeff());
    return (a - b).cwiseAbs().rowwise().sum().maxCoeff() / scale;
}

}  // namespace

TEST_CASE("flat layout is component-major", "[system][layout]") {
    Matrix table(2, 3);
    table << 1, 2, 3, 4, 5, 6;
    const FlatState x = flatten(table);
    REQUIRE(x.dim() == 2);
    REQUIRE(x.nodes() == 3);
    CHECK(x.values()(3) == 4.0);
    CHECK(x(1, 2) == 6.0);
    CHECK(x.component(0) == Vector(Eigen::Vector3d(1, 2, 3)));
    CHECK(x.at_node(1) == Vector(Eigen::Vector2d(2, 5)));
    CHECK(unflatten(x) == table);
    CHECK(unflatten(x.values(), 2, 3) == table);
}

TEST_CASE("flat state shape errors", "[system][layout]") {
    CHECK_THROWS_AS(FlatState(Vector::Zero(5), 2, 3), ShapeError);
    CHECK_THROWS_AS(unflatten(Vector::Zero(5), 2, 3), ShapeError);
    const CollocationProblem problem(linear_system(1.0), 5);
    CHECK_THROWS_AS(residual(problem, FlatState(1, 7)), ShapeError);
    CHECK_THROWS_AS(residual(problem, FlatState(2, 5)), ShapeError);
}

TEST_CASE("system validation", "[system][validate]") {
    PeriodicSystem s = linear_system(1.0);
    CHECK_NOTHROW(s.validate());
    PeriodicSystem bad = s;
    bad.dim = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = s;
    bad.omega = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = s;
    bad.subharmonic = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = s;
    bad.rhs = nullptr;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    CHECK_THROWS_AS(CollocationProblem(s, 4), InvalidArgument);
}

TEST_CASE("subharmonic scaling of frequency, phase and time", "[system][subharmonic]") {
    const PeriodicSystem s = pendulum_system({0.1, 10.0, 17.5}, 2);
    const CollocationProblem problem(s, 7);
    CHECK(problem.omega_eff() == Approx(17.5 / 2.0));
    for (int j = 0; j < 7; ++j) {
        const double t = problem.grid()[j];
        CHECK(problem.forcing_phase(j) == Approx(wrap_phase(2.0 * t)).margin(1e-14));
        CHECK(problem.original_time(j) == Approx(2.0 * t / 17.5));
    }
    const CollocationProblem plain(pendulum_system({0.1, 10.0, 17.5}), 7);
    CHECK(plain.forcing_phase(6) == kPi);
    CHECK(plain.original_time(6) == Approx(kPi / 17.5));
}

TEST_CASE("linear model: exact cycle has zero residual", "[system][residual][linear]") {
    for (int n : {3, 5, 15, 41}) {
        for (double p : {0.5, 1.0, 3.0}) {
            const CollocationProblem problem(linear_system(p), n);
            const FlatState x = linear_exact(problem.grid(), p);
            CHECK(max_abs(residual(problem, x).values()) <= 1e-12);
        }
    }
}

TEST_CASE("linear model: residual at zero is minus the forcing", "[system][residual][linear]") {
    const CollocationProblem problem(linear_system(2.0), 9);
    const FlatState r = residual(problem, FlatState(1, 9));
    for (int j = 0; j < 9; ++j) {
        CHECK(r(0, j) == Approx(-2.0 * std::cos(problem.grid()[j])).margin(1e-15));
    }
}

TEST_CASE("residual matches a node-by-node evaluation", "[system][residual][property]") {
    std::mt19937_64 rng(5);
    const PeriodicSystem s = pendulum_system({0.1, 120.0, 17.5}, 2);
    const CollocationProblem problem(s, 11);
    const FlatState x = random_state(2, 11, rng, 3.0);
    const FlatState r = residual(problem, x);
    const Matrix& d = problem.diff().entries();
    for (int k = 0; k < 2; ++k) {
        const Vector dx = d * x.component(k);
        for (int j = 0; j < 11; ++j) {
            const double phase = wrap_phase(2.0 * problem.grid()[j]);
            const double f = s.rhs(x.at_node(j), phase)(k);
            CHECK(r(k, j) == Approx(problem.omega_eff() * dx(j) - f).margin(1e-12));
        }
    }
}

TEST_CASE("linear Jacobian is omega D + I", "[system][jacobian][linear]") {
    const CollocationProblem problem(linear_system(1.0), 7);
    const Matrix expected = problem.diff().entries() + Matrix::Identity(7, 7);
    CHECK((jacobian(problem, FlatState(1, 7)) - expected).cwiseAbs().maxCoeff() == 0.0);
    const CollocationProblem fd(without_jacobian(linear_system(1.0)), 7);
    CHECK((jacobian(fd, FlatState(1, 7)) - expected).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("pendulum Jacobian blocks at the inverted state", "[system][jacobian][pendulum]") {
    const double a = 0.1;
    const double b = 50.0;
    const double w = 17.5;
    const int n = 9;
    const CollocationProblem problem(pendulum_system({a, b, w}), n);
    FlatState x(2, n);
    for (int j = 0; j < n; ++j) {
        x(0, j) = kPi;
    }
    const Matrix jac = jacobian(problem, x);
    const Matrix wd = w * problem.diff().entries();
    CHECK((jac.topLeftCorner(n, n) - wd).cwiseAbs().maxCoeff() == 0.0);
    CHECK((jac.topRightCorner(n, n) + Matrix::Identity(n, n)).cwiseAbs().maxCoeff() == 0.0);
    Matrix lower_left = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        lower_left(j, j) = -(1.0 + b * std::cos(problem.grid()[j]));
    }
    CHECK((jac.bottomLeftCorner(n, n) - lower_left).cwiseAbs().maxCoeff() <= 1e-13);
    const Matrix lower_right = wd + a * Matrix::Identity(n, n);
    CHECK((jac.bottomRightCorner(n, n) - lower_right).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("finite-difference Jacobian agrees with the analytic one", "[system][jacobian][property]") {
    std::mt19937_64 rng(99);
    const PeriodicSystem s = pendulum_system({0.1, 150.0, 17.5});
    const CollocationProblem analytic(s, 15);
    const CollocationProblem fd(without_jacobian(s), 15);
    for (int trial = 0; trial < 10; ++trial) {
        const FlatState x = random_state(2, 15, rng, 4.0);
        CHECK(rel_inf_diff(jacobian(fd, x), jacobian(analytic, x)) <= 1e-5);
    }
}

TEST_CASE("rhs failures carry the node index", "[system][errors]") {
    PeriodicSystem s = linear_system(1.0);
    s.rhs = [](const Vector& x, double t) -> Vector {
        if (t > 1.0) {
            throw std::domain_error("boom");
        }
        return -x;
    };
    const CollocationProblem problem(s, 5);
    try {
        (void)residual(problem, FlatState(1, 5));
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        // Nodes are -3pi/5, -pi/5, pi/5, 3pi/5, pi; the first above 1 is index 3.
        CHECK(e.node() == 3);
    }

    s.rhs = [](const Vector& x, double) -> Vector { return Vector::Constant(x.size(), NAN); };
    const CollocationProblem nan_problem(s, 5);
    CHECK_THROWS_AS(evaluate_rhs(nan_problem, FlatState(1, 5)), EvaluationError);
}

TEST_CASE("time derivative of constants is exactly zero", "[system][derivative]") {
    const CollocationProblem problem(pendulum_system({0.1, 0.0, 17.5}), 101);
    FlatState x(2, 101);
    for (int j = 0; j < 101; ++j) {
        x(0, j) = kPi;
        x(1, j) = -0.25;
    }
    CHECK(max_abs(time_derivative(problem, x).values()) == 0.0);
}

TEST_CASE("time derivative is in original time", "[system][derivative]") {
    // theta = sin(t) with t = omega tau gives dtheta/dtau = omega cos(t).
    const CollocationProblem problem(pendulum_system({0.1, 0.0, 4.0}), 9);
    FlatState x(2, 9);
    for (int j = 0; j < 9; ++j) {
        x(0, j) = std::sin(problem.grid()[j]);
    }
    const FlatState dx = time_derivative(problem, x);
    for (int j = 0; j < 9; ++j) {
        CHECK(dx(0, j) == Approx(4.0 * std::cos(problem.grid()[j])).margin(1e-12));
    }
}

TEST_CASE("collocation on a general node matrix", "[system][general]") {
    const NodeGrid g = NodeGrid::from_nodes({-2.5, -1.0, 0.2, 1.1, 3.0});
    const CollocationProblem problem(linear_system(1.0), diff_matrix_general(g));
    CHECK(problem.nodes() == 5);
    FlatState x(1, 5);
    for (int j = 0; j < 5; ++j) {
        x(0, j) = 0.5 * (std::cos(g[j]) + std::sin(g[j]));
    }
    CHECK(max_abs(residual(problem, x).values()) <= 1e-12);
}
