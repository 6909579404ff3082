#include "orlicz/obstacle.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>

#include "orlicz/error.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 2x2 symmetric tensor stored as (xx, xy, yy).
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
};

double bilinear(const Point& a, const Sym2& h, const Point& b) {
    return a.x * (h.xx * b.x + h.xy * b.y) + a.y * (h.xy * b.x + h.yy * b.y);
}

// Hessian of xi -> F(x, |xi|) at xi = g: F'' along g, F'/r across it.
Sym2 cell_hessian(const OperatorHandle& op, const Point& x, const Point& g, double eps) {
    const double r = norm(g);
    const double along = op.potential_curvature(x, std::max(r, eps));
    if (r <= eps) return {along, 0.0, along};
    const double across = op.potential_rate(x, r) / r;
    const double ux = g.x / r;
    const double uy = g.y / r;
    return {across + (along - across) * ux * ux, (along - across) * ux * uy, across + (along - across) * uy * uy};
}

void validate(const SolverConfig& c) {
    if (c.max_iter < 1) throw ConfigurationError("solver max_iter must be positive");
    if (!(c.tol_pg > 0.0)) throw ConfigurationError("solver tol_pg must be positive");
    if (!(c.tol_vi_rel > 0.0)) throw ConfigurationError("solver tol_vi must be positive");
    if (!(c.armijo > 0.0 && c.armijo < 1.0)) throw ConfigurationError("solver armijo constant must lie in (0, 1)");
    if (!(c.fixed_step > 0.0)) throw ConfigurationError("solver fixed_step must be positive");
}

}  // namespace

const char* to_string(StepRule r) noexcept { return r == StepRule::fixed ? "fixed" : "backtracking"; }
const char* to_string(InitialRule r) noexcept { return r == InitialRule::max_f_psi ? "max_f_psi" : "lifted_constant"; }

StepRule parse_step_rule(const std::string& s) {
    if (s == "fixed") return StepRule::fixed;
    if (s == "backtracking") return StepRule::backtracking;
    throw ConfigurationError("unknown step rule '" + s + "'");
}

InitialRule parse_initial_rule(const std::string& s) {
    if (s == "max_f_psi") return InitialRule::max_f_psi;
    if (s == "lifted_constant") return InitialRule::lifted_constant;
    throw ConfigurationError("unknown initial-point rule '" + s + "'");
}

SolverConfig SolverConfig::defaults(int dimension) {
    SolverConfig c;
    c.tol_pg = dimension == 1 ? 1e-9 : 1e-7;
    return c;
}

double energy(const OperatorHandle& op, const DiscreteField& u) {
    const Mesh& mesh = *u.mesh();
    double e = 0.0;
    for (std::size_t c = 0; c < mesh.cell_count(); ++c)
        e += mesh.cell_measures()[c] * op.potential(mesh.centroids()[c], norm(u.cell_gradient(c)));
    return e;
}

std::vector<double> energy_gradient(const OperatorHandle& op, const DiscreteField& u, double eps_grad) {
    const Mesh& mesh = *u.mesh();
    std::vector<double> g(mesh.node_count(), 0.0);
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        const Point grad = u.cell_gradient(c);
        const double r = norm(grad);
        if (r == 0.0) continue;
        const Point a = grad * (op.potential_rate(mesh.centroids()[c], r) / std::max(r, eps_grad));
        const auto v = mesh.cell_vertices(c);
        const auto& basis = mesh.basis_gradients(c);
        for (std::size_t k = 0; k < v.size(); ++k) g[v[k]] += mesh.cell_measures()[c] * dot(a, basis[k]);
    }
    return g;
}

void check_admissible(const ObstacleProblem& problem) {
    if (!problem.mesh) throw InfeasibleProblem("obstacle problem without a mesh");
    if (problem.f.mesh() != problem.mesh) throw MeshMismatch("boundary data f is not on the problem mesh");
    if (!problem.psi) return;
    if (problem.psi->mesh() != problem.mesh) throw MeshMismatch("obstacle psi is not on the problem mesh");
    const Mesh& mesh = *problem.mesh;
    for (std::size_t j = 0; j < mesh.node_count(); ++j)
        if (mesh.is_boundary(j) && (*problem.psi)[j] > problem.f[j] + 1e-12)
            throw InfeasibleProblem("obstacle exceeds the boundary data at node " + std::to_string(j) +
                                    "; the admissible set is empty");
}

DiscreteField initial_point(const ObstacleProblem& problem, InitialRule rule) {
    const Mesh& mesh = *problem.mesh;
    std::vector<double> v(mesh.node_count());
    auto lower = [&](std::size_t j) { return problem.psi ? (*problem.psi)[j] : -kInf; };
    double top = -kInf;
    for (std::size_t j = 0; j < v.size(); ++j) top = std::max({top, problem.f[j], lower(j)});
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (mesh.is_boundary(j))
            v[j] = problem.f[j];
        else if (rule == InitialRule::max_f_psi)
            v[j] = std::max(problem.f[j], lower(j));
        else
            v[j] = std::max(lower(j), top + 1.0);
    }
    return DiscreteField(problem.mesh, std::move(v));
}

double vi_residual(const OperatorHandle& op, const DiscreteField& u, const DiscreteField& w,
                   const ObstacleProblem* problem, double tol) {
    if (!u.same_mesh(w)) throw MeshMismatch("vi_residual: fields live on different meshes");
    const Mesh& mesh = *u.mesh();
    if (problem) {
        for (std::size_t j = 0; j < mesh.node_count(); ++j) {
            if (problem->psi && w[j] < (*problem->psi)[j] - tol)
                throw PreconditionError("vi_residual: competitor lies below the obstacle at node " + std::to_string(j));
            if (mesh.is_boundary(j) && std::abs(w[j] - problem->f[j]) > tol)
                throw PreconditionError("vi_residual: competitor does not match f at boundary node " +
                                        std::to_string(j));
        }
    }
    const DiscreteField diff = w - u;
    double s = 0.0;
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        const Point a = op.eval(mesh.centroids()[c], u.cell_gradient(c));
        s += mesh.cell_measures()[c] * dot(a, diff.cell_gradient(c));
    }
    return s;
}

ProbeSummary probe_vi(const ObstacleProblem& problem, const DiscreteField& u) {
    const Mesh& mesh = *problem.mesh;
    const auto g = energy_gradient(problem.op, u, problem.solver.eps_grad);
    ProbeSummary out;
    out.min_residual = kInf;
    for (std::size_t j = 0; j < mesh.node_count(); ++j) {
        if (mesh.is_boundary(j)) continue;
        // The residual of w = u + s hat_j is s times the j-th energy gradient entry.
        out.min_residual = std::min(out.min_residual, g[j]);
        ++out.count;
        const double room = problem.psi ? u[j] - (*problem.psi)[j] : 1.0;
        const double s = std::min(1.0, room);
        if (s > 0.0) {
            out.min_residual = std::min(out.min_residual, -s * g[j]);
            ++out.count;
        }
    }
    const DiscreteField start = initial_point(problem, InitialRule::max_f_psi);
    const DiscreteField lifted = initial_point(problem, InitialRule::lifted_constant);
    const DiscreteField chord = (u + start).scaled(0.5);
    for (const auto* w : {&start, &lifted, &chord}) {
        out.min_residual = std::min(out.min_residual, vi_residual(problem.op, u, *w, &problem, 1e-9));
        ++out.count;
    }
    return out;
}

SolveResult solve_obstacle(const ObstacleProblem& problem) {
    check_admissible(problem);
    const SolverConfig& cfg = problem.solver;
    validate(cfg);
    const Mesh& mesh = *problem.mesh;
    const OperatorHandle& op = problem.op;
    const std::size_t n = mesh.node_count();

    std::vector<double> lower(n, -kInf);
    if (problem.psi) lower = problem.psi->values();
    auto project = [&](std::vector<double>& v) {
        for (std::size_t j = 0; j < n; ++j) v[j] = mesh.is_boundary(j) ? problem.f[j] : std::max(v[j], lower[j]);
    };

    DiscreteField u = initial_point(problem, cfg.initial);
    SolveResult res(u);
    double e = energy(op, u);
    res.energy_history.push_back(e);
    double last_step = kInf;
    bool stalled = false;

    std::vector<int> free_index(n, -1);
    std::vector<double> diag(n);
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;

    for (int iter = 0;; ++iter) {
        const std::vector<double> g = energy_gradient(op, u, cfg.eps_grad);
        double pg = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (!mesh.is_boundary(j)) pg = std::max(pg, std::abs(u[j] - std::max(lower[j], u[j] - g[j])));
        res.pg_norm = pg;
        res.tol_vi = cfg.tol_vi_rel * (1.0 + std::abs(e));

        if (pg <= cfg.tol_pg && last_step <= cfg.tol_pg) {
            const ProbeSummary probes = probe_vi(problem, u);
            res.vi_residual = probes.min_residual;
            res.probes = probes.count;
            if (probes.min_residual >= -res.tol_vi) {
                res.converged = true;
                res.message = "converged";
                break;
            }
        }
        if (stalled) {
            res.message = "line search stalled with projected gradient " + std::to_string(pg);
            break;
        }
        if (iter >= cfg.max_iter) {
            res.message = "iteration cap " + std::to_string(cfg.max_iter) + " reached";
            break;
        }

        // Per-cell Hessians of the energy in grad u, floored relative to their scale.
        std::vector<Sym2> hess(mesh.cell_count());
        double scale = 0.0;
        for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
            hess[c] = cell_hessian(op, mesh.centroids()[c], u.cell_gradient(c), cfg.eps_grad);
            if (std::isfinite(hess[c].xx)) scale = std::max(scale, std::max(hess[c].xx, hess[c].yy));
        }
        if (!(scale > 0.0)) scale = 1.0;
        const double floor = cfg.hessian_floor * scale;
        for (auto& h : hess) {
            if (!std::isfinite(h.xx) || !std::isfinite(h.yy)) h = {scale / cfg.hessian_floor, 0.0, scale / cfg.hessian_floor};
            h.xx += floor;
            h.yy += floor;
        }

        // Diagonal first; it scales the active components and the epsilon-active test.
        std::fill(diag.begin(), diag.end(), 0.0);
        for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
            const auto v = mesh.cell_vertices(c);
            const auto& b = mesh.basis_gradients(c);
            for (std::size_t k = 0; k < v.size(); ++k)
                diag[v[k]] += mesh.cell_measures()[c] * bilinear(b[k], hess[c], b[k]);
        }
        double w = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (!mesh.is_boundary(j)) w = std::max(w, std::abs(u[j] - std::max(lower[j], u[j] - g[j] / diag[j])));
        const double eps_active = std::min(1e-3, w);

        int nfree = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const bool active = u[j] <= lower[j] + eps_active && g[j] > 0.0;
            free_index[j] = mesh.is_boundary(j) || active ? -1 : nfree++;
        }

        std::vector<double> d(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            if (!mesh.is_boundary(j) && free_index[j] < 0) d[j] = -g[j] / diag[j];
        bool newton_ok = false;
        if (nfree > 0) {
            triplets.clear();
            for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
                const auto v = mesh.cell_vertices(c);
                const auto& b = mesh.basis_gradients(c);
                for (std::size_t a = 0; a < v.size(); ++a) {
                    const int ia = free_index[v[a]];
                    if (ia < 0) continue;
                    for (std::size_t k = 0; k < v.size(); ++k) {
                        const int ik = free_index[v[k]];
                        if (ik < 0) continue;
                        triplets.emplace_back(ia, ik, mesh.cell_measures()[c] * bilinear(b[a], hess[c], b[k]));
                    }
                }
            }
            Eigen::SparseMatrix<double> k(nfree, nfree);
            k.setFromTriplets(triplets.begin(), triplets.end());
            Eigen::VectorXd rhs(nfree);
            for (std::size_t j = 0; j < n; ++j)
                if (free_index[j] >= 0) rhs[free_index[j]] = -g[j];
            ldlt.compute(k);
            if (ldlt.info() == Eigen::Success) {
                const Eigen::VectorXd sol = ldlt.solve(rhs);
                if (ldlt.info() == Eigen::Success && sol.allFinite()) {
                    for (std::size_t j = 0; j < n; ++j)
                        if (free_index[j] >= 0) d[j] = sol[free_index[j]];
                    newton_ok = true;
                }
            }
        }
        if (!newton_ok)
            for (std::size_t j = 0; j < n; ++j)
                if (!mesh.is_boundary(j)) d[j] = -g[j] / diag[j];

        // Backtracking on E along the projection arc; the scaled gradient is the fallback direction.
        const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(e));
        auto try_direction = [&](const std::vector<double>& dir, double& e_new, std::vector<double>& out) {
            double alpha = cfg.step_rule == StepRule::fixed ? cfg.fixed_step : 1.0;
            const int tries = cfg.step_rule == StepRule::fixed ? 1 : 60;
            for (int t = 0; t < tries; ++t, alpha *= 0.5) {
                out = u.values();
                for (std::size_t j = 0; j < n; ++j) out[j] += alpha * dir[j];
                project(out);
                double decrease = 0.0;
                for (std::size_t j = 0; j < n; ++j) decrease += g[j] * (out[j] - u[j]);
                if (out == u.values()) return false;
                e_new = energy(op, DiscreteField(problem.mesh, out));
                if (cfg.step_rule == StepRule::fixed) return true;
                if (e_new <= e + cfg.armijo * decrease && e_new <= e) return true;
                // Below round-off in E the descent test carries no information.
                if (-decrease <= roundoff && e_new <= e + roundoff) return true;
            }
            return false;
        };
        double e_new = e;
        std::vector<double> next;
        bool accepted = try_direction(d, e_new, next);
        if (!accepted && newton_ok) {
            std::vector<double> fallback(n, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                if (!mesh.is_boundary(j)) fallback[j] = -g[j] / diag[j];
            accepted = try_direction(fallback, e_new, next);
        }
        if (!accepted) {
            // No representable decrease remains; the next pass decides convergence.
            stalled = true;
            last_step = 0.0;
            continue;
        }
        last_step = 0.0;
        for (std::size_t j = 0; j < n; ++j) last_step = std::max(last_step, std::abs(next[j] - u[j]));
        u = DiscreteField(problem.mesh, std::move(next));
        e = e_new;
        res.energy_history.push_back(e);
        ++res.iterations;
    }

    res.u = u;
    res.energy = e;
    res.last_step = last_step;
    return res;
}

DiscreteField hat_function(const MeshPtr& mesh, std::size_t node, double height) {
    std::vector<double> v(mesh->node_count(), 0.0);
    v.at(node) = height;
    return DiscreteField(mesh, std::move(v));
}

SupersolutionReport supersolution_check(const OperatorHandle& op, const DiscreteField& u,
                                        const std::vector<DiscreteField>& probes, double tol) {
    const Mesh& mesh = *u.mesh();
    SupersolutionReport report;
    report.min_integral = kInf;
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const DiscreteField& w = probes[k];
        if (!w.same_mesh(u)) throw MeshMismatch("supersolution probe on a different mesh");
        for (std::size_t j = 0; j < mesh.node_count(); ++j) {
            if (w[j] < 0.0) throw PreconditionError("supersolution probe must be non-negative");
            if (mesh.is_boundary(j) && w[j] != 0.0) throw PreconditionError("supersolution probe must vanish on the boundary");
        }
        double s = 0.0;
        for (std::size_t c = 0; c < mesh.cell_count(); ++c)
            s += mesh.cell_measures()[c] * dot(op.eval(mesh.centroids()[c], u.cell_gradient(c)), w.cell_gradient(c));
        report.integrals.push_back(s);
        report.min_integral = std::min(report.min_integral, s);
        if (s < -tol) report.violations.push_back(k);
    }
    if (probes.empty()) report.min_integral = 0.0;
    return report;
}

double quasiminimizer_ratio(const PhiFunction& phi, const DiscreteField& u, const DiscreteField& v,
                            const std::vector<std::size_t>& region) {
    if (!u.same_mesh(v)) throw MeshMismatch("quasiminimizer_ratio: fields live on different meshes");
    const Mesh& mesh = *u.mesh();
    std::vector<std::size_t> cells = region;
    if (cells.empty()) {
        cells.resize(mesh.cell_count());
        for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = c;
    }
    double num = 0.0;
    double den = 0.0;
    std::size_t differing = 0;
    for (std::size_t c : cells) {
        const Point gu = u.cell_gradient(c);
        const Point gv = v.cell_gradient(c);
        if (norm(gu - gv) <= 1e-14 * (1.0 + norm(gu))) continue;
        ++differing;
        num += mesh.cell_measures()[c] * phi.eval(mesh.centroids()[c], norm(gu));
        den += mesh.cell_measures()[c] * phi.eval(mesh.centroids()[c], norm(gv));
    }
    if (differing == 0) throw UndefinedRatio("quasiminimizer ratio: u and v agree on the region");
    if (!(den > 0.0)) throw UndefinedRatio("quasiminimizer ratio: competitor has zero energy on the disagreement set");
    return num / den;
}

}  // namespace orlicz
