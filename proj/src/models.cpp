#include "limcyc/models.hpp"

#include "limcyc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace limcyc {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string(name) + " must be positive");
    }
}

}  // namespace

// ---------------------------------------------------------------- pendulum --

void PendulumParams::validate() const {
    require_positive(omega, "omega");
    if (!(a >= 0.0)) {
        throw InvalidArgument("damping a must be nonnegative");
    }
    if (!(b >= 0.0)) {
        throw InvalidArgument("drive amplitude b must be nonnegative");
    }
}

PendulumParams pendulum_from_physical(const PhysicalPendulum& ph) {
    require_positive(ph.l, "rod length l");
    require_positive(ph.g, "gravity g");
    return PendulumParams{
        .a = 2.0 * ph.mu / std::sqrt(ph.l * ph.g),
        .b = ph.A * ph.omega * ph.omega / ph.l,
        .omega = ph.omega,
    };
}

double pendulum_sin(double theta) noexcept {
    const double k = std::nearbyint(theta / kPi);
    const double r = theta - k * kPi;
    const double s = std::sin(r);
    return std::fmod(k, 2.0) == 0.0 ? s : -s;
}

double pendulum_cos(double theta) noexcept {
    const double k = std::nearbyint(theta / kPi);
    const double r = theta - k * kPi;
    const double c = std::cos(r);
    return std::fmod(k, 2.0) == 0.0 ? c : -c;
}

PeriodicSystem pendulum_system(const PendulumParams& p, int subharmonic) {
    p.validate();
    PeriodicSystem sys;
    sys.dim = 2;
    sys.omega = p.omega;
    sys.subharmonic = subharmonic;
    sys.rhs = [p](const Vector& x, double t) {
        Vector f(2);
        f(0) = x(1);
        f(1) = -p.a * x(1) - (1.0 + p.b * std::cos(t)) * pendulum_sin(x(0));
        return f;
    };
    sys.jac = [p](const Vector& x, double t) {
        Matrix j(2, 2);
        j(0, 0) = 0.0;
        j(0, 1) = 1.0;
        j(1, 0) = -(1.0 + p.b * std::cos(t)) * pendulum_cos(x(0));
        j(1, 1) = -p.a;
        return j;
    };
    sys.validate();
    return sys;
}

// ----------------------------------------------------------------- circuit --

void CircuitParams::validate() const {
    require_positive(R1, "R1");
    require_positive(R2, "R2");
    require_positive(R3, "R3");
    require_positive(R4, "R4");
    require_positive(C1, "C1");
    require_positive(C2, "C2");
    require_positive(L, "L");
    require_positive(i_s, "i_s");
    require_positive(eta, "eta");
    require_positive(T_abs, "T_abs");
    require_positive(T_period, "T_period");
    if (!std::isfinite(A_m)) {
        throw InvalidArgument("A_m must be finite");
    }
}

double CircuitParams::thermal_voltage() const noexcept {
    return kBoltzmann * T_abs / kElementaryCharge;
}

double CircuitParams::omega() const noexcept { return 2.0 * kPi / T_period; }

double square_wave(double phase, double amplitude) noexcept {
    return phase >= 0.0 ? amplitude : -amplitude;
}

double diode_residual(double v_d, double x1, double x3, double vs, const CircuitParams& p) {
    const double n_vt = p.eta * p.thermal_voltage();
    const double series = p.R1 + p.R2;
    return series * (vs - x1 - v_d - p.i_s * p.R1 * std::expm1(v_d / n_vt)) -
           p.R2 * (vs - x1 - p.R1 * x3 - v_d);
}

DiodeSolution solve_diode(double x1, double x3, double vs, const CircuitParams& p) {
    if (!std::isfinite(x1) || !std::isfinite(x3) || !std::isfinite(vs)) {
        throw std::runtime_error("diode solve: non-finite input");
    }
    const double n_vt = p.eta * p.thermal_voltage();
    const double series = p.R1 + p.R2;
    const double diode_scale = series * p.i_s * p.R1;

    // g(V) = c - R1 V - diode_scale * expm1(V / nVT), with expm1 > -1 and
    // expm1 <= 0 for V <= 0, gives g(lo) >= 0 >= g(hi).
    const double c = series * (vs - x1) - p.R2 * (vs - x1 - p.R1 * x3);
    double lo = std::min(0.0, c / p.R1);
    double hi = (c + diode_scale) / p.R1;

    DiodeSolution sol;
    sol.tolerance = 1e-13 * series * std::max(1.0, std::abs(vs));

    auto g = [&](double v) { return c - p.R1 * v - diode_scale * std::expm1(v / n_vt); };
    auto dg = [&](double v) { return -p.R1 - diode_scale * std::exp(v / n_vt) / n_vt; };

    // Exponential-dominated estimate of the root, an upper bound when c > 0.
    double v = c > 0.0 ? n_vt * std::log1p(c / diode_scale) : lo;
    v = std::clamp(v, lo, hi);
    double gv = g(v);

    int it = 0;
    for (; it < 200; ++it) {
        if (std::abs(gv) <= sol.tolerance) {
            break;
        }
        if (gv > 0.0) {
            lo = v;
        } else {
            hi = v;
        }
        double next = v - gv / dg(v);
        if (!std::isfinite(next) || next <= lo || next >= hi) {
            next = 0.5 * (lo + hi);
        }
        if (next == v) {
            break;  // bracket exhausted at double resolution
        }
        v = next;
        gv = g(v);
    }
    if (!std::isfinite(v) || !std::isfinite(gv)) {
        throw std::runtime_error("diode solve failed to reach a finite root");
    }
    sol.v_d = v;
    sol.residual = diode_residual(v, x1, x3, vs, p);
    sol.iterations = it;
    sol.x1 = x1;
    sol.x3 = x3;
    sol.vs = vs;
    return sol;
}

double diode_voltage(double x1, double x3, double vs, const CircuitParams& p) {
    return solve_diode(x1, x3, vs, p).v_d;
}

PeriodicSystem circuit_system(const CircuitParams& p, DiodeObserver observer) {
    p.validate();
    PeriodicSystem sys;
    sys.dim = 3;
    sys.omega = p.omega();
    sys.subharmonic = 1;
    auto rhs_with_source = [p, observer = std::move(observer)](const Vector& x, double vs) {
        const DiodeSolution d = solve_diode(x(0), x(2), vs, p);
        if (observer) {
            observer(d);
        }
        const double n_vt = p.eta * p.thermal_voltage();
        const double r34 = p.R3 + p.R4;
        Vector f(3);
        f(0) = (vs - x(0) - p.R1 * x(2) - d.v_d) / (p.C1 * (p.R1 + p.R2));
        f(1) = (-x(1) + p.R4 * x(2)) / (p.C2 * r34);
        f(2) = (vs - p.R4 / r34 * x(1) - p.R3 * p.R4 / r34 * x(2) - d.v_d -
                p.i_s * p.R1 * std::expm1(d.v_d / n_vt)) /
               p.L;
        return f;
    };
    sys.rhs = [p, rhs_with_source](const Vector& x, double t) -> Vector {
        // At the jumps of the source the rhs is the mean of its one-sided limits,
        // the value the trigonometric interpolant of a jump converges to.
        if (t == kPi || t == 0.0) {
            return 0.5 * (rhs_with_source(x, p.A_m) + rhs_with_source(x, -p.A_m));
        }
        return rhs_with_source(x, square_wave(t, p.A_m));
    };
    sys.validate();
    return sys;
}

Vector circuit_operating_point(const CircuitParams& p, double vs) {
    p.validate();
    const double n_vt = p.eta * p.thermal_voltage();
    const double load = p.R1 + p.R4;
    // h(V) = vs - V - load i_s expm1(V / nVT) is strictly decreasing; same
    // bracket argument as the diode solve.
    auto h = [&](double v) { return vs - v - load * p.i_s * std::expm1(v / n_vt); };
    double lo = std::min(0.0, vs);
    double hi = vs + load * p.i_s;
    for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double v_d = 0.5 * (lo + hi);
    const double x3 = p.i_s * std::expm1(v_d / n_vt);
    Vector x(3);
    x << p.R4 * x3, p.R4 * x3, x3;
    return x;
}

CircuitOutputs circuit_outputs(const Vector& x, const Vector& xdot, const CircuitParams& p) {
    if (x.size() != 3 || xdot.size() != 3) {
        throw ShapeError("circuit outputs need 3-component state and derivative");
    }
    return CircuitOutputs{
        .i_d = x(2) + p.C1 * xdot(0),
        .v_0 = p.C2 * p.R3 * xdot(1) + x(1),
    };
}

// ------------------------------------------------------------------ linear --

PeriodicSystem linear_system(double amplitude) {
    PeriodicSystem sys;
    sys.dim = 1;
    sys.omega = 1.0;
    sys.rhs = [amplitude](const Vector& x, double t) {
        Vector f(1);
        f(0) = -x(0) + amplitude * std::cos(t);
        return f;
    };
    sys.jac = [](const Vector&, double) { return Matrix::Constant(1, 1, -1.0); };
    sys.validate();
    return sys;
}

double linear_steady_state(double amplitude, double t) noexcept {
    return amplitude * (std::cos(t) + std::sin(t)) / 2.0;
}

}  // namespace limcyc
