#include "orlicz/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "orlicz/error.hpp"

namespace orlicz {

namespace {

double integrand(const PhiFunction& phi, const Point& x, double t, double power) {
    const double v = phi.eval(x, t);
    return power == 0.0 ? v : std::pow(v, 1.0 + power);
}

double scaled_modular(const PhiFunction& phi, const Mesh& mesh, std::span<const double> g, double power,
                      double lambda) {
    const auto& centroids = mesh.centroids();
    const auto& measures = mesh.cell_measures();
    double sum = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c) sum += measures[c] * integrand(phi, centroids[c], std::abs(g[c]) / lambda, power);
    return sum;
}

}  // namespace

double modular(const PhiFunction& phi, const Mesh& mesh, std::span<const double> g, double power) {
    if (g.size() != mesh.cell_count()) throw MeshMismatch("cellwise data does not match the mesh cell count");
    if (power < 0.0) throw PreconditionError("modular power must be non-negative");
    return scaled_modular(phi, mesh, g, power, 1.0);
}

double luxemburg_norm(const PhiFunction& phi, const Mesh& mesh, std::span<const double> g, double power,
                      double rel_tol) {
    if (g.size() != mesh.cell_count()) throw MeshMismatch("cellwise data does not match the mesh cell count");
    if (std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; })) return 0.0;

    auto rho = [&](double lambda) { return scaled_modular(phi, mesh, g, power, lambda); };
    double lo = 1.0;
    double hi = 1.0;
    if (rho(1.0) > 1.0) {
        while (rho(hi) > 1.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e150) throw BracketExhausted("Luxemburg norm bracket", lo, hi);
        }
    } else {
        while (rho(lo) <= 1.0) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-150) return hi;
        }
    }
    // Invariant: rho(lo) > 1 >= rho(hi).
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (rho(mid) > 1.0 ? lo : hi) = mid;
    }
    return hi;
}

SobolevGap sobolev_distance(const PhiFunction& phi, const DiscreteField& u, const DiscreteField& v, double delta) {
    if (!u.same_mesh(v)) throw MeshMismatch("sobolev_distance: fields live on different meshes");
    if (delta < 0.0) throw PreconditionError("sobolev_distance: delta must be non-negative");
    const Mesh& mesh = *u.mesh();
    const DiscreteField diff = u - v;
    const std::vector<double> values = diff.centroid_values();
    const std::vector<Point> grad = diff.gradient();
    const std::vector<double> slopes = magnitudes(grad);

    SobolevGap out;
    out.modular_gap = modular(phi, mesh, values, delta) + modular(phi, mesh, slopes, delta);
    out.norm_gap = luxemburg_norm(phi, mesh, values, delta) + luxemburg_norm(phi, mesh, slopes, delta);
    return out;
}

HolderNorm holder_seminorm(const DiscreteField& u, const Box& compact, double alpha, double min_margin) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("Hoelder exponent must lie in (0, 1]");
    const Mesh& mesh = *u.mesh();
    const int dim = mesh.dimension();
    if (!mesh.domain().contains_box(compact, min_margin))
        throw GeometryError("compact set is not inside the domain with the required margin");

    // Nodes on the box edges count even when their coordinates carry rounding.
    const double slack = 1e-12 * std::max(1.0, mesh.domain().diameter());
    const Box closed{{compact.lo.x - slack, compact.lo.y - slack}, {compact.hi.x + slack, compact.hi.y + slack}};
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < mesh.node_count(); ++i)
        if (closed.contains(mesh.nodes()[i], dim)) inside.push_back(i);
    if (inside.size() < 2) throw GeometryError("compact set contains no node pair");

    const auto& nodes = mesh.nodes();
    HolderNorm out;
    out.nodes = inside.size();
    for (std::size_t a = 0; a < inside.size(); ++a) {
        const std::size_t i = inside[a];
        out.sup_norm = std::max(out.sup_norm, std::abs(u[i]));
        for (std::size_t b = a + 1; b < inside.size(); ++b) {
            const std::size_t j = inside[b];
            const double d = distance(nodes[i], nodes[j]);
            const double ratio = std::abs(u[i] - u[j]) / (alpha == 1.0 ? d : std::pow(d, alpha));
            out.seminorm = std::max(out.seminorm, ratio);
        }
    }
    return out;
}

}  // namespace orlicz
