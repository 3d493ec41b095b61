#pragma once

// Trigonometric differentiation matrices on periodic node grids.
//
// A grid of N = 2n+1 nodes in (-pi, pi] supports a unique trigonometric
// interpolant of degree n. The differentiation matrix D maps node samples of
// that interpolant to node samples of its derivative, so D is exact for any
// trigonometric polynomial of degree <= n.

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace limcyc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class NodeGrid {
public:
    /// Equispaced grid t_j = -pi + 2 pi j / N, j = 1..N. N must be odd and >= 3.
    static NodeGrid equispaced(int n_nodes);

    /// Arbitrary strictly increasing nodes in (-pi, pi].
    static NodeGrid from_nodes(std::vector<double> nodes);

    [[nodiscard]] int size() const noexcept { return static_cast<int>(nodes_.size()); }
    [[nodiscard]] int max_exact_degree() const noexcept { return (size() - 1) / 2; }
    [[nodiscard]] bool is_equispaced() const noexcept { return equispaced_; }
    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
    [[nodiscard]] double operator[](int j) const { return nodes_[static_cast<std::size_t>(j)]; }

private:
    NodeGrid(std::vector<double> nodes, bool equispaced)
        : nodes_(std::move(nodes)), equispaced_(equispaced) {}

    std::vector<double> nodes_;
    bool equispaced_;
};

enum class DiffMatrixKind { Equispaced, General };

class DiffMatrix {
public:
    DiffMatrix(NodeGrid grid, Matrix entries, DiffMatrixKind kind);

    [[nodiscard]] int order() const noexcept { return static_cast<int>(entries_.rows()); }
    [[nodiscard]] const Matrix& entries() const noexcept { return entries_; }
    [[nodiscard]] DiffMatrixKind kind() const noexcept { return kind_; }
    [[nodiscard]] const NodeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] double operator()(int j, int k) const { return entries_(j, k); }

private:
    NodeGrid grid_;
    Matrix entries_;
    DiffMatrixKind kind_;
};

/// Same as NodeGrid::equispaced.
[[nodiscard]] NodeGrid equispaced_nodes(int n_nodes);

/// Closed form D_jk = (-1)^(j+k) / (2 sin(pi (j-k) / N)), zero diagonal.
[[nodiscard]] DiffMatrix diff_matrix_equispaced(int n_nodes);

/// tau_j = (1/2) prod_{l != j} sin((t_j - t_l) / 2), the derivative of
/// prod_l sin((t - t_l) / 2) at t = t_j.
[[nodiscard]] Vector tau_weights(std::span<const double> nodes);
[[nodiscard]] Vector tau_weights(const NodeGrid& grid);

/// Differentiation matrix for arbitrary distinct nodes (odd count).
[[nodiscard]] DiffMatrix diff_matrix_general(const NodeGrid& grid);

/// D^k x by k successive matrix-vector products.
[[nodiscard]] Vector apply_derivative(const DiffMatrix& d, const Vector& x, int k);

/// Degree-n trigonometric interpolant of equispaced node data, evaluated at t.
[[nodiscard]] double trig_interpolate(const NodeGrid& grid, const Vector& x, double t);

/// Maps any phase to (-pi, pi].
[[nodiscard]] double wrap_phase(double t) noexcept;

}  // namespace limcyc
