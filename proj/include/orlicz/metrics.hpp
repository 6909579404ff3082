#pragma once

#include <cstddef>
#include <span>

#include "orlicz/mesh.hpp"
#include "orlicz/phi_function.hpp"

namespace orlicz {

/// Midpoint-rule modular: sum over cells of |cell| * phi(x_c, |g_c|)^(1+power).
double modular(const PhiFunction& phi, const Mesh& mesh, std::span<const double> g, double power = 0.0);

/// inf{lambda > 0 : modular(g / lambda) <= 1}, by bisection to relative
/// tolerance `rel_tol`. Zero data has norm zero.
double luxemburg_norm(const PhiFunction& phi, const Mesh& mesh, std::span<const double> g, double power = 0.0,
                      double rel_tol = 1e-8);

struct SobolevGap {
    double modular_gap = 0.0;  ///< rho(|u - v|) + rho(|grad u - grad v|)
    double norm_gap = 0.0;     ///< ||u - v|| + |||grad u - grad v|||
};

/// Distance in W^{1, phi^{1+delta}}; the zeroth-order term uses centroid
/// values of the nodal difference.
SobolevGap sobolev_distance(const PhiFunction& phi, const DiscreteField& u, const DiscreteField& v, double delta);

struct HolderNorm {
    double seminorm = 0.0;  ///< max |u(x) - u(y)| / |x - y|^alpha over node pairs in K
    double sup_norm = 0.0;  ///< max |u| over nodes in K
    std::size_t nodes = 0;
    double total() const noexcept { return seminorm + sup_norm; }
};

/// Hoelder seminorm over nodes of the closed box `compact`. The box must sit
/// inside the domain with at least `min_margin` clearance.
HolderNorm holder_seminorm(const DiscreteField& u, const Box& compact, double alpha, double min_margin = 0.0);

}  // namespace orlicz
