#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "orlicz/obstacle.hpp"

namespace orlicz::testing {

inline DiscreteField field(const MeshPtr& mesh, const char* expression) {
    return DiscreteField::interpolate(mesh, ScalarField::from_expression(expression));
}

/// 1D obstacle 0.5 - 4 (x - 0.5)^2 on (0, 1) with zero boundary data.
inline ObstacleProblem parabola_problem(int resolution, const PhiFunction& phi) {
    auto mesh = build_mesh(DomainSpec::interval(0.0, 1.0), resolution);
    return ObstacleProblem{mesh, phi, canonical_operator(phi), DiscreteField::constant(mesh, 0.0),
                           field(mesh, "0.5 - 4*(x - 0.5)^2"), SolverConfig::defaults(1)};
}

/// Double phase t^2 + a t^3 on the unit square with a smooth bump obstacle.
inline ObstacleProblem bump_problem_2d(int resolution, const char* weight = "0.5 + 0.5*x") {
    auto mesh = build_mesh(DomainSpec::unit_square(), resolution);
    const auto phi = PhiFunction::double_phase(2.0, 3.0, ScalarField::from_expression(weight));
    return ObstacleProblem{mesh, phi, canonical_operator(phi), DiscreteField::constant(mesh, 0.0),
                           field(mesh, "0.3 - 3*((x - 0.5)^2 + (y - 0.5)^2)"), SolverConfig::defaults(2)};
}

/// Projected SOR for min sum (u_{j+1} - u_j)^2 / h subject to u >= psi, u_0 = u_N = 0.
inline std::vector<double> psor_oracle(const std::vector<double>& psi, double omega = 1.8) {
    const std::size_t n = psi.size();
    std::vector<double> u(n, 0.0);
    for (std::size_t j = 1; j + 1 < n; ++j) u[j] = std::max(psi[j], 0.0);
    for (int sweep = 0; sweep < 10000000; ++sweep) {
        double change = 0.0;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double gs = 0.5 * (u[j - 1] + u[j + 1]);
            const double v = std::max(psi[j], u[j] + omega * (gs - u[j]));
            change = std::max(change, std::abs(v - u[j]));
            u[j] = v;
        }
        if (change < 1e-16) break;
    }
    return u;
}

/// Coordinate descent for min sum h |(u_{j+1} - u_j)/h|^p subject to u >= psi
/// and zero boundary values; each local problem is solved by bisection on
/// its derivative.
inline std::vector<double> coordinate_descent_oracle(const std::vector<double>& psi, double p) {
    const std::size_t n = psi.size();
    std::vector<double> u(n, 0.0);
    for (std::size_t j = 1; j + 1 < n; ++j) u[j] = std::max(psi[j], 0.0);
    auto spow = [p](double s) { return std::copysign(std::pow(std::abs(s), p - 1.0), s); };
    for (int sweep = 0; sweep < 1000000; ++sweep) {
        double change = 0.0;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double a = u[j - 1];
            const double b = u[j + 1];
            double lo = std::min(a, b);
            double hi = std::max(a, b);
            for (int k = 0; k < 200 && hi > lo; ++k) {
                const double mid = 0.5 * (lo + hi);
                (spow(mid - a) - spow(b - mid) > 0.0 ? hi : lo) = mid;
            }
            const double v = std::max(psi[j], 0.5 * (lo + hi));
            change = std::max(change, std::abs(v - u[j]));
            u[j] = v;
        }
        if (change < 1e-15) break;
    }
    return u;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace orlicz::testing
