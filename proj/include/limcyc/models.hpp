#pragma once

// Test systems: vertically driven pendulum, rectifier/filter commutation
// circuit, and a scalar linear model with a closed-form limit cycle.

#include "limcyc/system.hpp"

#include <functional>

namespace limcyc {

// -----------------------------------------------------------------------------
// Driven pendulum:  theta'' + a theta' + (1 + b cos(omega tau)) sin(theta) = 0
// -----------------------------------------------------------------------------

struct PendulumParams {
    double a = 0.1;
    double b = 0.0;
    double omega = 17.5;

    void validate() const;
};

/// Dimensional description of the pivot-driven pendulum.
struct PhysicalPendulum {
    double mu = 0.0;     // viscous damping
    double l = 1.0;      // rod length
    double g = 1.0;      // gravity
    double A = 0.0;      // pivot drive amplitude
    double omega = 1.0;  // drive frequency
};

/// a = 2 mu / sqrt(l g), b = A omega^2 / l.
[[nodiscard]] PendulumParams pendulum_from_physical(const PhysicalPendulum& ph);

/// State (theta, dtheta/dtau); analytic Jacobian included.
[[nodiscard]] PeriodicSystem pendulum_system(const PendulumParams& p, int subharmonic = 1);

/// sin(theta) reduced about the nearest multiple of the double pi, so that the
/// floating-point equilibria 0 and pi give an exact zero.
[[nodiscard]] double pendulum_sin(double theta) noexcept;
[[nodiscard]] double pendulum_cos(double theta) noexcept;

// -----------------------------------------------------------------------------
// Commutation circuit: square-wave source, diode, C1 filter, L, C2 and load R4.
// State (V1, V2, iL).
// -----------------------------------------------------------------------------

inline constexpr double kBoltzmann = 1.380649e-23;       // J/K
inline constexpr double kElementaryCharge = 1.602177e-19;  // C

struct CircuitParams {
    double R1 = 0.0149;
    double R2 = 0.15;
    double R3 = 0.2;
    double R4 = 2.0;
    double C1 = 470.0e-6;
    double C2 = 20.0e-6;
    double L = 20.0e-6;
    double i_s = 1.0e-8;
    double eta = 0.8953;
    double T_abs = 300.0;
    double A_m = 5.6;
    double T_period = 1.0e-5;

    void validate() const;
    /// k_B T / q.
    [[nodiscard]] double thermal_voltage() const noexcept;
    [[nodiscard]] double omega() const noexcept;
};

/// A_m * sgn(phase) for phase in (-pi, pi], with sgn(0) = +1.
[[nodiscard]] double square_wave(double phase, double amplitude) noexcept;

/// g(V_d): the diode relation with dV1/dtau eliminated. Strictly decreasing in V_d.
[[nodiscard]] double diode_residual(double v_d, double x1, double x3, double vs,
                                    const CircuitParams& p);

struct DiodeSolution {
    double v_d = 0.0;
    double residual = 0.0;  // g(v_d)
    double tolerance = 0.0;  // 1e-13 (R1 + R2) max(1, |Vs|)
    int iterations = 0;
    // Inputs the root was solved for.
    double x1 = 0.0;
    double x3 = 0.0;
    double vs = 0.0;
};

/// Root of g by Newton steps inside a closed-form bracket, bisecting when a
/// step leaves the bracket.
[[nodiscard]] DiodeSolution solve_diode(double x1, double x3, double vs, const CircuitParams& p);
[[nodiscard]] double diode_voltage(double x1, double x3, double vs, const CircuitParams& p);

/// Called after every diode solve inside the circuit rhs; must be re-entrant if
/// the rhs is evaluated concurrently.
using DiodeObserver = std::function<void(const DiodeSolution&)>;

/// No analytic Jacobian; collocation falls back to finite differences.
[[nodiscard]] PeriodicSystem circuit_system(const CircuitParams& p, DiodeObserver observer = {});

/// Equilibrium of the circuit with the source held at vs: x1 = x2 = R4 x3 and
/// x3 = i_s (exp(V_d / (eta V_T)) - 1) with vs = V_d + (R1 + R4) x3.
[[nodiscard]] Vector circuit_operating_point(const CircuitParams& p, double vs);

struct CircuitOutputs {
    double i_d = 0.0;  // x3 + C1 dx1/dtau
    double v_0 = 0.0;  // C2 R3 dx2/dtau + x2
};

/// xdot is the original-time derivative of the state.
[[nodiscard]] CircuitOutputs circuit_outputs(const Vector& x, const Vector& xdot,
                                             const CircuitParams& p);

// -----------------------------------------------------------------------------
// Linear validation model: dx/dtau = -x + p cos(tau), omega = 1.
// -----------------------------------------------------------------------------

[[nodiscard]] PeriodicSystem linear_system(double amplitude);
/// p (cos t + sin t) / 2.
[[nodiscard]] double linear_steady_state(double amplitude, double t) noexcept;

}  // namespace limcyc
