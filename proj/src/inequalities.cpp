#include "orlicz/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "orlicz/error.hpp"
#include "orlicz/metrics.hpp"

namespace orlicz {

namespace {

double ratio_of(double lhs, double rhs) {
    if (lhs == 0.0) return 0.0;
    if (rhs == 0.0) return std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

InequalityReport make_report(std::string id, double lhs, double rhs, const Mesh& mesh) {
    InequalityReport r;
    r.id = std::move(id);
    r.lhs = lhs;
    r.rhs = rhs;
    r.ratio = ratio_of(lhs, rhs);
    r.resolution = mesh.resolution();
    if (std::isinf(r.ratio)) r.note = "right-hand side vanishes";
    return r;
}

void require_same_mesh(const DiscreteField& a, const DiscreteField& b) {
    if (!a.same_mesh(b)) throw MeshMismatch("fields live on different meshes");
}

double mean_value(const DiscreteField& u, const std::vector<BallPoint>& pts) {
    double s = 0.0;
    double m = 0.0;
    for (const auto& p : pts) {
        s += p.weight * u.value_at(p.cell, p.barycentric);
        m += p.weight;
    }
    return m > 0.0 ? s / m : 0.0;
}

double grad_norm(const std::vector<Point>& g, std::size_t c) { return norm(g[c]); }

constexpr std::array<double, 3> kGaussNodes{-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGaussWeights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

}  // namespace

bool InequalityReport::finite() const noexcept {
    return std::isfinite(lhs) && std::isfinite(rhs) && std::isfinite(ratio) && lhs >= 0.0 && rhs >= 0.0;
}

double ball_measure(int dimension, double radius) {
    return dimension == 1 ? 2.0 * radius : std::numbers::pi * radius * radius;
}

std::vector<BallPoint> ball_points(const Mesh& mesh, const Ball& ball) {
    if (!(ball.radius > 0.0)) throw PreconditionError("ball radius must be positive");
    std::vector<BallPoint> out;
    if (mesh.dimension() == 1) {
        const double lo = ball.center.x - ball.radius;
        const double hi = ball.center.x + ball.radius;
        for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
            const auto v = mesh.cell_vertices(c);
            const double a = mesh.nodes()[v[0]].x;
            const double b = mesh.nodes()[v[1]].x;
            const double l = std::max(std::min(a, b), lo);
            const double r = std::min(std::max(a, b), hi);
            if (!(r > l)) continue;
            for (std::size_t k = 0; k < 3; ++k) {
                const double x = 0.5 * (l + r) + 0.5 * (r - l) * kGaussNodes[k];
                const double t = (x - a) / (b - a);
                out.push_back({c, Point{x, 0.0}, {1.0 - t, t, 0.0}, 0.5 * (r - l) * kGaussWeights[k]});
            }
        }
        return out;
    }
    const double r2 = ball.radius * ball.radius;
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        // Skip cells whose vertices are all farther than r plus the cell diameter.
        const auto v = mesh.cell_vertices(c);
        double nearest = std::numeric_limits<double>::infinity();
        for (int k : v) nearest = std::min(nearest, distance(mesh.nodes()[k], ball.center));
        if (nearest > ball.radius + 2.0 * mesh.h()) continue;
        for (const auto& sp : subcell_points(mesh, c, 8)) {
            const Point d = sp.position - ball.center;
            if (dot(d, d) < r2) out.push_back({c, sp.position, sp.barycentric, sp.weight});
        }
    }
    return out;
}

InequalityReport caccioppoli_interior(const PhiFunction& phi, const DiscreteField& u, const DiscreteField& psi,
                                      const Ball& ball) {
    require_same_mesh(u, psi);
    const Mesh& mesh = *u.mesh();
    const DomainSpec& dom = mesh.domain();
    if (!dom.contains(ball.center) || dom.distance_to_boundary(ball.center) < 2.0 * ball.radius * (1.0 - 1e-12))
        throw GeometryError("interior estimate needs the doubled ball inside the domain");

    const auto inner = ball_points(mesh, ball);
    const auto outer = ball_points(mesh, Ball{ball.center, 2.0 * ball.radius});
    const auto gu = u.gradient();
    const auto gpsi = psi.gradient();
    const double diam = 4.0 * ball.radius;
    const double u_mean = mean_value(u, outer);
    const double psi_mean = mean_value(psi, outer);

    double lhs = 0.0;
    double m_in = 0.0;
    for (const auto& p : inner) {
        lhs += p.weight * phi.eval(p.position, grad_norm(gu, p.cell));
        m_in += p.weight;
    }
    double rhs = 0.0;
    double m_out = 0.0;
    for (const auto& p : outer) {
        const double du = std::abs(u.value_at(p.cell, p.barycentric) - u_mean) / diam;
        const double dpsi = std::abs(psi.value_at(p.cell, p.barycentric) - psi_mean) / diam;
        rhs += p.weight * (phi.eval(p.position, du) + phi.eval(p.position, dpsi) +
                           phi.eval(p.position, grad_norm(gpsi, p.cell)));
        m_out += p.weight;
    }
    auto r = make_report("caccioppoli_interior", lhs / m_in, rhs / m_out, mesh);
    r.center = ball.center;
    r.radius = ball.radius;
    return r;
}

InequalityReport caccioppoli_boundary(const PhiFunction& phi, const DiscreteField& u, const DiscreteField& f,
                                      const Ball& ball) {
    require_same_mesh(u, f);
    const Mesh& mesh = *u.mesh();
    const DomainSpec& dom = mesh.domain();
    if (!dom.contains(ball.center)) throw PreconditionError("boundary estimate needs the ball centre in the domain");
    if (dom.distance_to_boundary(ball.center) >= 2.0 * ball.radius)
        throw PreconditionError("doubled ball stays inside the domain; use the interior estimate");

    const auto inner = ball_points(mesh, ball);
    const auto outer = ball_points(mesh, Ball{ball.center, 2.0 * ball.radius});
    const auto gu = u.gradient();
    const auto gf = f.gradient();
    const double diam = 4.0 * ball.radius;

    double lhs = 0.0;
    for (const auto& p : inner) lhs += p.weight * phi.eval(p.position, grad_norm(gu, p.cell));
    double rhs = 0.0;
    for (const auto& p : outer) {
        const double d = std::abs(u.value_at(p.cell, p.barycentric) - f.value_at(p.cell, p.barycentric)) / diam;
        rhs += p.weight * (phi.eval(p.position, grad_norm(gf, p.cell)) + phi.eval(p.position, d));
    }
    const int dim = mesh.dimension();
    auto r = make_report("caccioppoli_boundary", lhs / ball_measure(dim, ball.radius),
                         rhs / ball_measure(dim, 2.0 * ball.radius), mesh);
    r.center = ball.center;
    r.radius = ball.radius;
    return r;
}

InequalityReport energy_bound_check(const PhiFunction& phi_i, const DiscreteField& u_i, const DiscreteField& f,
                                    const std::optional<DiscreteField>& psi) {
    require_same_mesh(u_i, f);
    const Mesh& mesh = *u_i.mesh();
    std::vector<double> data = f.values();
    bool reduced = false;
    if (psi) {
        require_same_mesh(u_i, *psi);
        for (std::size_t j = 0; j < data.size(); ++j)
            if ((*psi)[j] > data[j]) {
                data[j] = (*psi)[j];
                reduced = true;
            }
    }
    const DiscreteField g(u_i.mesh(), std::move(data));
    const auto lhs = modular(phi_i, mesh, magnitudes(u_i.gradient()));
    const auto rhs = modular(phi_i, mesh, magnitudes(g.gradient()));
    auto r = make_report("energy_bound", lhs, rhs, mesh);
    if (reduced) r.note = r.note.empty() ? "data replaced by max(f, psi)" : r.note + "; data replaced by max(f, psi)";
    return r;
}

std::vector<InequalityReport> higher_integrability_margin(const PhiFunction& phi, const DiscreteField& u,
                                                          const DiscreteField& f,
                                                          const std::optional<DiscreteField>& psi,
                                                          const std::vector<double>& gammas) {
    require_same_mesh(u, f);
    if (psi) require_same_mesh(u, *psi);
    const Mesh& mesh = *u.mesh();
    const auto gu = magnitudes(u.gradient());
    const auto gf = magnitudes(f.gradient());
    const auto gpsi = psi ? magnitudes(psi->gradient()) : std::vector<double>{};
    const double base = modular(phi, mesh, gu);

    std::vector<InequalityReport> out;
    for (double gamma : gammas) {
        if (!(gamma > 0.0 && gamma < 1.0)) throw PreconditionError("higher integrability exponents lie in (0, 1)");
        const double lhs = modular(phi, mesh, gu, gamma);
        double rhs = std::pow(base, 1.0 + gamma) + modular(phi, mesh, gf, gamma) + 1.0;
        if (psi) rhs += modular(phi, mesh, gpsi, gamma);
        auto r = make_report("higher_integrability", lhs, rhs, mesh);
        r.gamma = gamma;
        out.push_back(std::move(r));
    }
    return out;
}

InequalityReport hardy_check(const PhiFunction& phi, const DiscreteField& u) {
    const Mesh& mesh = *u.mesh();
    double scale = 0.0;
    for (double v : u.values()) scale = std::max(scale, std::abs(v));
    for (std::size_t j = 0; j < mesh.node_count(); ++j)
        if (mesh.is_boundary(j) && std::abs(u[j]) > 1e-12 * std::max(1.0, scale))
            throw PreconditionError("Hardy check needs zero boundary values");

    const auto values = u.centroid_values();
    std::vector<double> quotient(mesh.cell_count());
    for (std::size_t c = 0; c < mesh.cell_count(); ++c)
        quotient[c] = std::abs(values[c]) / mesh.domain().distance_to_boundary(mesh.centroids()[c]);
    const double lhs = luxemburg_norm(phi, mesh, quotient);
    const double rhs = luxemburg_norm(phi, mesh, magnitudes(u.gradient()));
    return make_report("hardy", lhs, rhs, mesh);
}

double refinement_ratio(double coarse, double fine) {
    if (coarse == 0.0 && fine == 0.0) return 1.0;
    if (coarse == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(fine / coarse);
}

}  // namespace orlicz
