#include "limcyc/system.hpp"

#include "limcyc/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace limcyc {

namespace {

void require_layout(const CollocationProblem& problem, const FlatState& x) {
    if (x.dim() != problem.dim() || x.nodes() != problem.nodes() ||
        x.values().size() != problem.unknowns()) {
        throw ShapeError("state of shape " + std::to_string(x.dim()) + "x" +
                         std::to_string(x.nodes()) + " does not match problem " +
                         std::to_string(problem.dim()) + "x" + std::to_string(problem.nodes()));
    }
}

Vector eval_at_node(const CollocationProblem& problem, const Vector& state, int j) {
    Vector f;
    try {
        f = problem.system().rhs(state, problem.forcing_phase(j));
    } catch (const EvaluationError&) {
        throw;
    } catch (const std::exception& e) {
        throw EvaluationError(static_cast<std::size_t>(j), e.what());
    }
    if (f.size() != problem.dim()) {
        throw EvaluationError(static_cast<std::size_t>(j), "rhs returned wrong dimension");
    }
    if (!f.allFinite()) {
        throw EvaluationError(static_cast<std::size_t>(j), "rhs returned a non-finite value");
    }
    return f;
}

Matrix node_jacobian(const CollocationProblem& problem, const Vector& state, int j) {
    const PeriodicSystem& sys = problem.system();
    const int m = sys.dim;
    if (sys.jac) {
        Matrix a;
        try {
            a = sys.jac(state, problem.forcing_phase(j));
        } catch (const std::exception& e) {
            throw EvaluationError(static_cast<std::size_t>(j), e.what());
        }
        if (a.rows() != m || a.cols() != m) {
            throw EvaluationError(static_cast<std::size_t>(j), "jac returned wrong shape");
        }
        return a;
    }
    static const double kSqrtEps = std::sqrt(std::numeric_limits<double>::epsilon());
    const Vector f0 = eval_at_node(problem, state, j);
    Matrix a(m, m);
    Vector probe = state;
    for (int c = 0; c < m; ++c) {
        const double h = kSqrtEps * (1.0 + std::abs(state(c)));
        probe(c) = state(c) + h;
        // Divide by the step actually taken after rounding.
        const double taken = probe(c) - state(c);
        a.col(c) = (eval_at_node(problem, probe, j) - f0) / taken;
        probe(c) = state(c);
    }
    return a;
}

}  // namespace

void PeriodicSystem::validate() const {
    if (dim < 1) {
        throw InvalidArgument("system dimension must be >= 1");
    }
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw InvalidArgument("omega must be positive");
    }
    if (subharmonic < 1) {
        throw InvalidArgument("subharmonic order must be >= 1");
    }
    if (!rhs) {
        throw InvalidArgument("system has no right-hand side");
    }
}

FlatState::FlatState(int dim, int nodes) : FlatState(Vector::Zero(dim * nodes), dim, nodes) {}

FlatState::FlatState(Vector values, int dim, int nodes)
    : values_(std::move(values)), dim_(dim), nodes_(nodes) {
    if (dim < 1 || nodes < 1 || values_.size() != static_cast<Eigen::Index>(dim) * nodes) {
        throw ShapeError("flat state of length " + std::to_string(values_.size()) +
                         " is not " + std::to_string(dim) + "x" + std::to_string(nodes));
    }
}

Vector FlatState::at_node(int j) const {
    Vector s(dim_);
    for (int k = 0; k < dim_; ++k) {
        s(k) = (*this)(k, j);
    }
    return s;
}

FlatState flatten(const Matrix& table) {
    const auto m = static_cast<int>(table.rows());
    const auto n = static_cast<int>(table.cols());
    FlatState x(m, n);
    for (int k = 0; k < m; ++k) {
        for (int j = 0; j < n; ++j) {
            x(k, j) = table(k, j);
        }
    }
    return x;
}

Matrix unflatten(const FlatState& x) {
    Matrix table(x.dim(), x.nodes());
    for (int k = 0; k < x.dim(); ++k) {
        for (int j = 0; j < x.nodes(); ++j) {
            table(k, j) = x(k, j);
        }
    }
    return table;
}

Matrix unflatten(const Vector& values, int dim, int nodes) {
    return unflatten(FlatState(values, dim, nodes));
}

CollocationProblem::CollocationProblem(PeriodicSystem system, int n_nodes)
    : CollocationProblem(std::move(system), diff_matrix_equispaced(n_nodes)) {}

CollocationProblem::CollocationProblem(PeriodicSystem system, DiffMatrix d)
    : system_(std::move(system)), d_(std::move(d)), omega_eff_(0.0) {
    system_.validate();
    if (d_.order() % 2 == 0) {
        throw InvalidArgument("collocation grid size must be odd");
    }
    omega_eff_ = system_.omega / static_cast<double>(system_.subharmonic);
}

double CollocationProblem::forcing_phase(int j) const {
    return wrap_phase(static_cast<double>(system_.subharmonic) * grid()[j]);
}

double CollocationProblem::original_time(int j) const {
    return static_cast<double>(system_.subharmonic) * grid()[j] / system_.omega;
}

FlatState evaluate_rhs(const CollocationProblem& problem, const FlatState& x) {
    require_layout(problem, x);
    FlatState f(problem.dim(), problem.nodes());
    for (int j = 0; j < problem.nodes(); ++j) {
        const Vector fj = eval_at_node(problem, x.at_node(j), j);
        for (int k = 0; k < problem.dim(); ++k) {
            f(k, j) = fj(k);
        }
    }
    return f;
}

FlatState time_derivative(const CollocationProblem& problem, const FlatState& x) {
    require_layout(problem, x);
    FlatState dx(problem.dim(), problem.nodes());
    const int n = problem.nodes();
    for (int k = 0; k < problem.dim(); ++k) {
        // D annihilates constants; differentiating the offset from the first node
        // value makes constant components give an exact zero.
        const Vector offset = x.values().segment(k * n, n).array() - x(k, 0);
        dx.values().segment(k * n, n) = problem.omega_eff() * (problem.diff().entries() * offset);
    }
    return dx;
}

FlatState residual(const CollocationProblem& problem, const FlatState& x) {
    FlatState r = time_derivative(problem, x);
    r.values() -= evaluate_rhs(problem, x).values();
    return r;
}

Matrix jacobian(const CollocationProblem& problem, const FlatState& x) {
    require_layout(problem, x);
    const int m = problem.dim();
    const int n = problem.nodes();
    Matrix jac = Matrix::Zero(m * n, m * n);
    for (int k = 0; k < m; ++k) {
        jac.block(k * n, k * n, n, n) = problem.omega_eff() * problem.diff().entries();
    }
    for (int j = 0; j < n; ++j) {
        const Matrix a = node_jacobian(problem, x.at_node(j), j);
        for (int k = 0; k < m; ++k) {
            for (int c = 0; c < m; ++c) {
                jac(k * n + j, c * n + j) -= a(k, c);
            }
        }
    }
    return jac;
}

}  // namespace limcyc
