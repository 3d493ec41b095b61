#pragma once

// Initial guesses for the collocation Newton solve: analytic seeds and fixed-step
// RK4 transients. The transient path is independent of the collocation code and
// also serves as a reference solution in tests.

#include "limcyc/system.hpp"

#include <vector>

namespace limcyc {

struct TransientConfig {
    int cycles = 20;
    int steps_per_cycle = 256;
    Vector initial_state;
    /// Keep every step of every cycle; the final cycle is always kept.
    bool record_trajectory = true;

    void validate(int dim) const;
};

struct TransientResult {
    std::vector<double> times;  // original time tau
    Matrix states;              // dim x times.size()
    FlatState samples;          // final cycle sampled at the grid phases
    Vector final_state;
};

/// Classical RK4 on dx/dtau = f(x, omega tau) over cycles * (2 pi s / omega),
/// starting at grid phase -pi. Step boundaries fall on phases -pi + 2 pi i / steps,
/// and stages are evaluated strictly inside each step so that jumps in the forcing
/// at step boundaries are seen from the correct side.
[[nodiscard]] TransientResult rk4_transient(const PeriodicSystem& system, const NodeGrid& grid,
                                            const TransientConfig& cfg);

/// theta_j = pi + eps sin(h t_j), v_j = eps omega h cos(h t_j) / s.
[[nodiscard]] FlatState guess_near_pi(const NodeGrid& grid, double epsilon, int harmonic,
                                      double omega, int subharmonic = 1);
[[nodiscard]] FlatState guess_near_pi(int n_nodes, double epsilon, int harmonic, double omega,
                                      int subharmonic = 1);

/// Every component equal to the matching entry of value at all nodes.
[[nodiscard]] FlatState constant_guess(const Vector& value, int n_nodes);

}  // namespace limcyc
