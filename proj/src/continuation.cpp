#include "limcyc/continuation.hpp"

#include "limcyc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace limcyc {

namespace {

constexpr double kPi = std::numbers::pi;

std::optional<SolveResult> try_solve(const ProblemFamily& family, double p, const FlatState& x0,
                                     const NewtonConfig& newton) {
    try {
        SolveResult r = newton_solve(family(p), x0, newton);
        if (r.converged) {
            return r;
        }
    } catch (const SingularJacobianError&) {
    } catch (const EvaluationError&) {
    }
    return std::nullopt;
}

// Golden-section search for the maximum of f on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > tol) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

void SweepConfig::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw InvalidArgument("sweep step must be positive");
    }
    if (!std::isfinite(start) || !std::isfinite(end)) {
        throw InvalidArgument("sweep range must be finite");
    }
    const double ms = effective_min_step();
    if (!(ms > 0.0) || ms > step) {
        throw InvalidArgument("min_step must lie in (0, step]");
    }
}

Branch sweep(const ProblemFamily& family, const FlatState& x0, const SweepConfig& cfg,
             const NewtonConfig& newton, std::string provenance) {
    cfg.validate();
    Branch branch;
    branch.provenance = std::move(provenance);

    auto seed = try_solve(family, cfg.start, x0, newton);
    if (!seed) {
        throw BranchSeedError("sweep seed did not converge at " + cfg.parameter_name + "=" +
                              std::to_string(cfg.start));
    }
    branch.points.push_back({cfg.start, std::move(*seed)});

    const double direction = cfg.end > cfg.start ? 1.0 : -1.0;
    const double min_step = cfg.effective_min_step();
    double p = cfg.start;
    double h = cfg.step;
    while (p != cfg.end) {
        double next = p + direction * h;
        // Land exactly on the end point instead of leaving a rounding-sized last step.
        if ((next - cfg.end) * direction > -1e-9 * cfg.step) {
            next = cfg.end;
        }
        auto solved = try_solve(family, next, branch.points.back().result.x, newton);
        if (solved) {
            branch.points.push_back({next, std::move(*solved)});
            p = next;
            h = std::min(cfg.step, 2.0 * h);
            continue;
        }
        if (cfg.adaptive && h / 2.0 >= min_step) {
            h /= 2.0;
            continue;
        }
        branch.status = BranchStatus::Truncated;
        branch.failed_parameter = next;
        break;
    }
    return branch;
}

Extrema extract_extrema(const NodeGrid& grid, const FlatState& solution, int component,
                        int oversample) {
    if (oversample < 4) {
        throw InvalidArgument("oversample must be >= 4");
    }
    if (component < 0 || component >= solution.dim()) {
        throw ShapeError("component index out of range");
    }
    if (solution.nodes() != grid.size()) {
        throw ShapeError("solution does not match grid");
    }
    const Vector data = solution.component(component);
    auto value = [&](double t) { return trig_interpolate(grid, data, t); };

    const int samples = oversample * grid.size();
    const double spacing = 2.0 * kPi / static_cast<double>(samples);
    int imax = 0;
    int imin = 0;
    double vmax = -std::numeric_limits<double>::infinity();
    double vmin = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= samples; ++i) {
        const double v = value(-kPi + spacing * static_cast<double>(i));
        if (v > vmax) {
            vmax = v;
            imax = i;
        }
        if (v < vmin) {
            vmin = v;
            imin = i;
        }
    }

    constexpr double kPhaseTol = 1e-10;
    Extrema out;
    const double tmax0 = -kPi + spacing * static_cast<double>(imax);
    const double tmin0 = -kPi + spacing * static_cast<double>(imin);
    const double tmax = golden_max(value, tmax0 - spacing, tmax0 + spacing, kPhaseTol);
    const double tmin =
        golden_max([&](double t) { return -value(t); }, tmin0 - spacing, tmin0 + spacing, kPhaseTol);

    const double refined_max = value(tmax);
    const double refined_min = value(tmin);
    out.max_value = std::max(vmax, refined_max);
    out.argmax = refined_max >= vmax ? wrap_phase(tmax) : wrap_phase(tmax0);
    out.min_value = std::min(vmin, refined_min);
    out.argmin = refined_min <= vmin ? wrap_phase(tmin) : wrap_phase(tmin0);
    return out;
}

}  // namespace limcyc
