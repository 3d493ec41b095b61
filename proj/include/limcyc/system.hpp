#pragma once

// Periodic nonautonomous systems in normalized form
//
//     omega * dx/dt = f(x, t),   f 2pi-periodic in t,
//
// and their collocation on a node grid: omega_eff * (1_m (x) D) X = F(X).

#include "limcyc/spectral.hpp"

#include <functional>

namespace limcyc {

/// f(x, phase): original-time derivative of the state at forcing phase in (-pi, pi].
using RhsFunction = std::function<Vector(const Vector& state, double phase)>;
/// df/dx(x, phase), m x m.
using JacobianFunction = std::function<Matrix(const Vector& state, double phase)>;

struct PeriodicSystem {
    int dim = 1;
    RhsFunction rhs;
    JacobianFunction jac;  // optional; finite differences when empty
    double omega = 1.0;
    int subharmonic = 1;

    /// Throws InvalidArgument unless dim >= 1, omega > 0, subharmonic >= 1 and rhs is set.
    void validate() const;
};

/// Nm values, component-major: entries [k*N, (k+1)*N) hold component k at all nodes.
class FlatState {
public:
    FlatState() = default;
    FlatState(int dim, int nodes);
    FlatState(Vector values, int dim, int nodes);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int nodes() const noexcept { return nodes_; }
    [[nodiscard]] const Vector& values() const noexcept { return values_; }
    [[nodiscard]] Vector& values() noexcept { return values_; }

    [[nodiscard]] double operator()(int component, int node) const {
        return values_(component * nodes_ + node);
    }
    double& operator()(int component, int node) { return values_(component * nodes_ + node); }

    /// Component k at all nodes.
    [[nodiscard]] Vector component(int k) const { return values_.segment(k * nodes_, nodes_); }
    /// All components at node j.
    [[nodiscard]] Vector at_node(int j) const;

private:
    Vector values_;
    int dim_ = 0;
    int nodes_ = 0;
};

/// m x N table (row k = component k) to component-major flat state.
[[nodiscard]] FlatState flatten(const Matrix& table);
[[nodiscard]] Matrix unflatten(const FlatState& x);
[[nodiscard]] Matrix unflatten(const Vector& values, int dim, int nodes);

class CollocationProblem {
public:
    /// Equispaced grid of n_nodes points with the closed-form matrix.
    CollocationProblem(PeriodicSystem system, int n_nodes);
    CollocationProblem(PeriodicSystem system, DiffMatrix d);

    [[nodiscard]] const PeriodicSystem& system() const noexcept { return system_; }
    [[nodiscard]] const NodeGrid& grid() const noexcept { return d_.grid(); }
    [[nodiscard]] const DiffMatrix& diff() const noexcept { return d_; }
    [[nodiscard]] double omega_eff() const noexcept { return omega_eff_; }
    [[nodiscard]] int dim() const noexcept { return system_.dim; }
    [[nodiscard]] int nodes() const noexcept { return d_.order(); }
    [[nodiscard]] int unknowns() const noexcept { return dim() * nodes(); }

    /// Forcing phase seen by rhs at node j: s * t_j wrapped to (-pi, pi].
    [[nodiscard]] double forcing_phase(int j) const;
    /// Original time of node j: s * t_j / omega.
    [[nodiscard]] double original_time(int j) const;

private:
    PeriodicSystem system_;
    DiffMatrix d_;
    double omega_eff_;
};

/// Stacked rhs values F(X) in the flat layout.
[[nodiscard]] FlatState evaluate_rhs(const CollocationProblem& problem, const FlatState& x);

/// R(X) = omega_eff (1_m (x) D) X - F(X).
[[nodiscard]] FlatState residual(const CollocationProblem& problem, const FlatState& x);

/// dR/dX. Uses system.jac when present, else forward differences per node.
[[nodiscard]] Matrix jacobian(const CollocationProblem& problem, const FlatState& x);

/// omega * (D X) per component: original-time derivative of the interpolant at the nodes.
[[nodiscard]] FlatState time_derivative(const CollocationProblem& problem, const FlatState& x);

}  // namespace limcyc
