#pragma once

#include "limcyc/solver.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace limcyc {

struct SweepConfig {
    std::string parameter_name;
    double start = 0.0;
    double end = 0.0;
    double step = 1.0;
    bool adaptive = true;
    std::optional<double> min_step;  // default step / 64

    [[nodiscard]] double effective_min_step() const noexcept {
        return min_step ? *min_step : step / 64.0;
    }
    void validate() const;
};

enum class BranchStatus { Completed, Truncated };

struct BranchPoint {
    double parameter = 0.0;
    SolveResult result;
};

struct Branch {
    std::vector<BranchPoint> points;
    std::string provenance;
    BranchStatus status = BranchStatus::Completed;
    /// Parameter value at which the step underflowed, when truncated.
    std::optional<double> failed_parameter;
};

using ProblemFamily = std::function<CollocationProblem(double parameter)>;

/// Natural-parameter continuation: each point is warm-started from the previous
/// converged state. Throws BranchSeedError if the start point does not converge.
[[nodiscard]] Branch sweep(const ProblemFamily& family, const FlatState& x0,
                           const SweepConfig& cfg, const NewtonConfig& newton = {},
                           std::string provenance = {});

struct Extrema {
    double max_value = 0.0;
    double min_value = 0.0;
    double argmax = 0.0;  // phase
    double argmin = 0.0;
};

/// Extrema of the trigonometric interpolant of one component: dense sampling on
/// oversample * N phases followed by golden-section refinement to 1e-10 in phase.
[[nodiscard]] Extrema extract_extrema(const NodeGrid& grid, const FlatState& solution,
                                      int component, int oversample = 8);

}  // namespace limcyc
