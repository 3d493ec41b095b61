#include "limcyc/spectral.hpp"

#include "limcyc/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace limcyc {

namespace {

constexpr double kPi = std::numbers::pi;

void require_odd_count(int n_nodes) {
    if (n_nodes < 3 || n_nodes % 2 == 0) {
        throw InvalidArgument("grid needs an odd number N >= 3 of points, got N=" +
                              std::to_string(n_nodes));
    }
}

}  // namespace

double wrap_phase(double t) noexcept {
    double r = std::remainder(t, 2.0 * kPi);
    if (r <= -kPi) {
        r += 2.0 * kPi;
    }
    return r;
}

NodeGrid NodeGrid::equispaced(int n_nodes) {
    require_odd_count(n_nodes);
    std::vector<double> nodes(static_cast<std::size_t>(n_nodes));
    const double n = static_cast<double>(n_nodes);
    for (int j = 1; j <= n_nodes; ++j) {
        nodes[static_cast<std::size_t>(j - 1)] = -kPi + 2.0 * kPi * static_cast<double>(j) / n;
    }
    // Avoid the rounding of -pi + 2 pi landing a hair off pi.
    nodes.back() = kPi;
    return NodeGrid(std::move(nodes), true);
}

NodeGrid NodeGrid::from_nodes(std::vector<double> nodes) {
    if (nodes.empty()) {
        throw InvalidArgument("grid needs at least one node");
    }
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (!(nodes[j] > -kPi && nodes[j] <= kPi)) {
            throw InvalidArgument("node " + std::to_string(j) + " outside (-pi, pi]");
        }
        if (j > 0 && !(nodes[j] > nodes[j - 1])) {
            throw DegenerateGridError("nodes must be strictly increasing (node " +
                                      std::to_string(j) + ")");
        }
    }
    return NodeGrid(std::move(nodes), false);
}

DiffMatrix::DiffMatrix(NodeGrid grid, Matrix entries, DiffMatrixKind kind)
    : grid_(std::move(grid)), entries_(std::move(entries)), kind_(kind) {
    if (entries_.rows() != grid_.size() || entries_.cols() != grid_.size()) {
        throw ShapeError("differentiation matrix does not match its grid");
    }
}

NodeGrid equispaced_nodes(int n_nodes) { return NodeGrid::equispaced(n_nodes); }

DiffMatrix diff_matrix_equispaced(int n_nodes) {
    NodeGrid grid = NodeGrid::equispaced(n_nodes);
    Matrix d = Matrix::Zero(n_nodes, n_nodes);
    const double n = static_cast<double>(n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
        for (int k = 0; k < n_nodes; ++k) {
            if (j == k) {
                continue;
            }
            // sin(pi m / N) = -sin(pi (m -+ N) / N); the reduced argument keeps
            // full relative accuracy when |m| is close to N.
            int m = j - k;
            double sign = ((j + k) % 2 == 0) ? 1.0 : -1.0;
            if (2 * m > n_nodes) {
                m -= n_nodes;
                sign = -sign;
            } else if (2 * m < -n_nodes) {
                m += n_nodes;
                sign = -sign;
            }
            d(j, k) = sign / (2.0 * std::sin(kPi * static_cast<double>(m) / n));
        }
    }
    return DiffMatrix(std::move(grid), std::move(d), DiffMatrixKind::Equispaced);
}

namespace {

// Half node differences (t_j - t_k) / 2. The equispaced grid knows its nodes
// exactly, so there the differences are formed from indices rather than from
// the rounded coordinates.
class HalfDifferences {
public:
    HalfDifferences(std::span<const double> nodes, bool equispaced)
        : nodes_(nodes), equispaced_(equispaced) {}

    [[nodiscard]] long double operator()(std::size_t j, std::size_t k) const {
        if (equispaced_) {
            return std::numbers::pi_v<long double> * (static_cast<long double>(j) -
                                                      static_cast<long double>(k)) /
                   static_cast<long double>(nodes_.size());
        }
        return (static_cast<long double>(nodes_[j]) - static_cast<long double>(nodes_[k])) / 2.0L;
    }

    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }

private:
    std::span<const double> nodes_;
    bool equispaced_;
};

std::vector<long double> tau_extended(const HalfDifferences& half) {
    const std::size_t n = half.size();
    std::vector<long double> tau(n);
    for (std::size_t j = 0; j < n; ++j) {
        long double prod = 0.5L;
        for (std::size_t l = 0; l < n; ++l) {
            if (l == j) {
                continue;
            }
            const long double s = std::sin(half(j, l));
            if (s == 0.0L) {
                throw DegenerateGridError("nodes " + std::to_string(j) + " and " +
                                          std::to_string(l) + " coincide");
            }
            prod *= s;
        }
        tau[j] = prod;
    }
    return tau;
}

}  // namespace

Vector tau_weights(std::span<const double> nodes) {
    const std::vector<long double> tau = tau_extended(HalfDifferences(nodes, false));
    Vector out(static_cast<Eigen::Index>(tau.size()));
    for (std::size_t j = 0; j < tau.size(); ++j) {
        out(static_cast<Eigen::Index>(j)) = static_cast<double>(tau[j]);
    }
    return out;
}

Vector tau_weights(const NodeGrid& grid) { return tau_weights(grid.nodes()); }

DiffMatrix diff_matrix_general(const NodeGrid& grid) {
    const int n = grid.size();
    if (n % 2 == 0) {
        throw InvalidArgument("general differentiation matrix needs an odd number of nodes, got " +
                              std::to_string(n));
    }
    const HalfDifferences half(grid.nodes(), grid.is_equispaced());
    const std::vector<long double> tau = tau_extended(half);
    Matrix d(n, n);
    for (std::size_t j = 0; j < tau.size(); ++j) {
        long double diag = 0.0L;
        for (std::size_t k = 0; k < tau.size(); ++k) {
            if (k == j) {
                continue;
            }
            const long double h = half(j, k);
            diag += 0.5L / std::tan(h);
            d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                static_cast<double>(tau[j] / (2.0L * tau[k]) / std::sin(h));
        }
        d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = static_cast<double>(diag);
    }
    return DiffMatrix(grid, std::move(d), DiffMatrixKind::General);
}

Vector apply_derivative(const DiffMatrix& d, const Vector& x, int k) {
    if (x.size() != d.order()) {
        throw ShapeError("vector of length " + std::to_string(x.size()) +
                         " does not match differentiation matrix of order " +
                         std::to_string(d.order()));
    }
    if (k < 0) {
        throw InvalidArgument("derivative order must be nonnegative");
    }
    Vector y = x;
    for (int i = 0; i < k; ++i) {
        y = d.entries() * y;
    }
    return y;
}

double trig_interpolate(const NodeGrid& grid, const Vector& x, double t) {
    const int n = grid.size();
    if (x.size() != n) {
        throw ShapeError("interpolation data of length " + std::to_string(x.size()) +
                         " does not match grid of size " + std::to_string(n));
    }
    if (!grid.is_equispaced()) {
        throw InvalidArgument("trigonometric interpolation requires an equispaced grid");
    }
    const double tw = wrap_phase(t);
    // Phases within a few ulps of a node return the node value.
    constexpr double kNodeHit = 8.0 * std::numeric_limits<double>::epsilon() * kPi;
    for (int j = 0; j < n; ++j) {
        if (std::abs(wrap_phase(tw - grid[j])) <= kNodeHit) {
            return x(j);
        }
    }
    // The kernels sum to one, so interpolating offsets from x(0) reproduces
    // constant data exactly.
    const double nd = static_cast<double>(n);
    double sum = 0.0;
    for (int j = 1; j < n; ++j) {
        const double half = (tw - grid[j]) / 2.0;
        const double den = nd * std::sin(half);
        // sin(N u) / (N sin u) -> 1 as u -> 0 (mod pi) for odd N.
        const double kernel = std::abs(den) < 1e-300 ? 1.0 : std::sin(nd * half) / den;
        sum += (x(j) - x(0)) * kernel;
    }
    return x(0) + sum;
}

}  // namespace limcyc
