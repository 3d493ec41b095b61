#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace limcyc {

/// Parameter or precondition violation (even N, nonpositive length, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Vector/matrix dimensions that do not fit together.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Coincident nodes; the differentiation matrix is undefined.
class DegenerateGridError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A right-hand side (or Jacobian) evaluation failed at a node.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(std::size_t node, const std::string& what)
        : std::runtime_error("evaluation failed at node " + std::to_string(node) + ": " + what),
          node_(node) {}

    [[nodiscard]] std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// LU factorization of the collocation Jacobian hit a (numerically) zero pivot.
class SingularJacobianError : public std::runtime_error {
public:
    explicit SingularJacobianError(int iteration)
        : std::runtime_error("singular Jacobian at Newton iteration " + std::to_string(iteration)),
          iteration_(iteration) {}

    [[nodiscard]] int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

/// Transient integration produced a non-finite state.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(long step)
        : std::runtime_error("transient diverged at step " + std::to_string(step)), step_(step) {}

    [[nodiscard]] long step() const noexcept { return step_; }

private:
    long step_;
};

/// The first point of a continuation sweep did not converge.
class BranchSeedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace limcyc
