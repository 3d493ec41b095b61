#pragma once

#include "limcyc/spectral.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace limcyc::testing {

// c0 + sum_k a_k cos(k t) + b_k sin(k t), with its exact derivative.
struct TrigPoly {
    double c0 = 0.0;
    std::vector<double> a;
    std::vector<double> b;

    [[nodiscard]] double value(double t) const {
        double s = c0;
        for (std::size_t k = 1; k <= a.size(); ++k) {
            const double kd = static_cast<double>(k);
            s += a[k - 1] * std::cos(kd * t) + b[k - 1] * std::sin(kd * t);
        }
        return s;
    }

    [[nodiscard]] double derivative(double t) const {
        double s = 0.0;
        for (std::size_t k = 1; k <= a.size(); ++k) {
            const double kd = static_cast<double>(k);
            s += kd * (-a[k - 1] * std::sin(kd * t) + b[k - 1] * std::cos(kd * t));
        }
        return s;
    }

    [[nodiscard]] Vector sample(const NodeGrid& grid) const {
        Vector v(grid.size());
        for (int j = 0; j < grid.size(); ++j) {
            v(j) = value(grid[j]);
        }
        return v;
    }

    [[nodiscard]] Vector sample_derivative(const NodeGrid& grid) const {
        Vector v(grid.size());
        for (int j = 0; j < grid.size(); ++j) {
            v(j) = derivative(grid[j]);
        }
        return v;
    }
};

inline TrigPoly random_trig_poly(int degree, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TrigPoly p;
    p.c0 = u(rng);
    for (int k = 0; k < degree; ++k) {
        p.a.push_back(u(rng));
        p.b.push_back(u(rng));
    }
    return p;
}

inline double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace limcyc::testing
