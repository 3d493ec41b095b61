#include "limcyc/warmstart.hpp"

#include "limcyc/errors.hpp"

#include <cmath>
#include <numbers>

namespace limcyc {

namespace {

constexpr double kPi = std::numbers::pi;

// Offset of the first and last RK stage into the step interior, as a fraction of h.
constexpr double kStageNudge = 1e-9;

}  // namespace

void TransientConfig::validate(int dim) const {
    if (cycles < 1) {
        throw InvalidArgument("transient needs at least one cycle");
    }
    if (steps_per_cycle < 8) {
        throw InvalidArgument("transient needs at least 8 steps per cycle");
    }
    if (initial_state.size() != dim) {
        throw ShapeError("initial state has " + std::to_string(initial_state.size()) +
                         " components, system has " + std::to_string(dim));
    }
}

TransientResult rk4_transient(const PeriodicSystem& system, const NodeGrid& grid,
                              const TransientConfig& cfg) {
    system.validate();
    cfg.validate(system.dim);

    const int m = system.dim;
    const double s = static_cast<double>(system.subharmonic);
    const double spc = static_cast<double>(cfg.steps_per_cycle);
    const double cycle_length = 2.0 * kPi * s / system.omega;
    const double h = cycle_length / spc;
    const double tau0 = -kPi * s / system.omega;
    const long total_steps = static_cast<long>(cfg.cycles) * cfg.steps_per_cycle;
    const long first_kept = cfg.record_trajectory ? 0 : total_steps - cfg.steps_per_cycle;

    // Forcing phase at step n plus fraction theta of a step, computed from the
    // step index so that long runs do not accumulate drift.
    auto phase_at = [&](long n, double theta) {
        const double in_cycle = static_cast<double>(n % cfg.steps_per_cycle) + theta;
        return wrap_phase(s * (-kPi + 2.0 * kPi * in_cycle / spc));
    };
    auto time_at = [&](long n) { return tau0 + static_cast<double>(n) * h; };

    TransientResult out;
    const long kept = total_steps - first_kept + 1;
    out.times.reserve(static_cast<std::size_t>(kept));
    out.states.resize(m, kept);

    Vector x = cfg.initial_state;
    if (first_kept == 0) {
        out.times.push_back(time_at(0));
        out.states.col(0) = x;
    }
    for (long n = 0; n < total_steps; ++n) {
        const Vector k1 = system.rhs(x, phase_at(n, kStageNudge));
        const Vector k2 = system.rhs(x + 0.5 * h * k1, phase_at(n, 0.5));
        const Vector k3 = system.rhs(x + 0.5 * h * k2, phase_at(n, 0.5));
        const Vector k4 = system.rhs(x + h * k3, phase_at(n, 1.0 - kStageNudge));
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!x.allFinite()) {
            throw DivergenceError(n + 1);
        }
        if (n + 1 >= first_kept) {
            const long col = n + 1 - first_kept;
            out.times.push_back(time_at(n + 1));
            out.states.col(col) = x;
        }
    }
    out.final_state = x;

    // Final cycle occupies the last steps_per_cycle + 1 columns.
    const long base = kept - 1 - cfg.steps_per_cycle;
    out.samples = FlatState(m, grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        const double q = (grid[j] + kPi) / (2.0 * kPi) * spc;
        long i = static_cast<long>(std::floor(q));
        if (i >= cfg.steps_per_cycle) {
            i = cfg.steps_per_cycle - 1;
        }
        if (i < 0) {
            i = 0;
        }
        const double frac = q - static_cast<double>(i);
        const Vector y0 = out.states.col(base + i);
        const Vector y1 = out.states.col(base + i + 1);
        Vector xj = y0;
        if (frac > 0.0) {
            // Cubic Hermite with slopes from the rhs keeps the sampling error at
            // the same order as the integrator.
            const long step = total_steps - cfg.steps_per_cycle + i;
            const Vector f0 = system.rhs(y0, phase_at(step, kStageNudge));
            const Vector f1 = system.rhs(y1, phase_at(step, 1.0 - kStageNudge));
            const double u = frac;
            const double h10 = u * (1.0 - u) * (1.0 - u);
            const double h01 = u * u * (3.0 - 2.0 * u);
            const double h11 = u * u * (u - 1.0);
            xj = y0 + h01 * (y1 - y0) + (h10 * h) * f0 + (h11 * h) * f1;
        }
        for (int k = 0; k < m; ++k) {
            out.samples(k, j) = xj(k);
        }
    }
    return out;
}

FlatState guess_near_pi(const NodeGrid& grid, double epsilon, int harmonic, double omega,
                        int subharmonic) {
    if (harmonic < 1) {
        throw InvalidArgument("harmonic must be >= 1");
    }
    if (subharmonic < 1) {
        throw InvalidArgument("subharmonic order must be >= 1");
    }
    const double hd = static_cast<double>(harmonic);
    FlatState x(2, grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        const double t = grid[j];
        x(0, j) = kPi + epsilon * std::sin(hd * t);
        x(1, j) = epsilon * omega * hd * std::cos(hd * t) / static_cast<double>(subharmonic);
    }
    return x;
}

FlatState guess_near_pi(int n_nodes, double epsilon, int harmonic, double omega,
                        int subharmonic) {
    return guess_near_pi(NodeGrid::equispaced(n_nodes), epsilon, harmonic, omega, subharmonic);
}

FlatState constant_guess(const Vector& value, int n_nodes) {
    FlatState x(static_cast<int>(value.size()), n_nodes);
    for (int k = 0; k < value.size(); ++k) {
        x.values().segment(k * n_nodes, n_nodes).setConstant(value(k));
    }
    return x;
}

}  // namespace limcyc
