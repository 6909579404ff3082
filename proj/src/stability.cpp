#include "orlicz/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "orlicz/error.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double last_over_first(double first, double last) {
    if (last == 0.0) return 0.0;
    if (first == 0.0) return kInf;
    return last / first;
}

SolveDiagnostics diagnostics(const SolveResult& r) {
    return {r.iterations, r.pg_norm, r.vi_residual, r.tol_vi, r.energy, r.converged};
}

SolveResult solve_or_throw(const ObstacleProblem& pb, const std::string& what) {
    SolveResult r = solve_obstacle(pb);
    if (!r.converged) throw NotConverged(what + ": " + r.message);
    return r;
}

}  // namespace

double theta_schedule(double gamma_proxy, double delta) {
    if (!(delta > 0.0) || !(delta < gamma_proxy / 4.0))
        throw PreconditionError("theta schedule needs 0 < delta < gamma/4");
    return (1.0 + gamma_proxy / 2.0) / (1.0 + gamma_proxy / 4.0) - 1.0;
}

void StabilityExperiment::validate() const {
    std::vector<std::string> v;
    if (!(delta > 0.0)) v.emplace_back("delta must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) v.emplace_back("alpha must lie in (0, 1]");
    if (i_max < 4) v.emplace_back("i_max must be at least 4");
    if (resolution < 2) v.emplace_back("resolution must be at least 2");
    if (!(t0 > 0.0)) v.emplace_back("t0 must be positive");
    if (!(t_cap > 0.0)) v.emplace_back("t_cap must be positive");
    if (!(rho_target > 0.0)) v.emplace_back("rho_target must be positive");
    if (theta && !(*theta > 0.0)) v.emplace_back("theta must be positive");
    if (!theta && !(delta > 0.0 && delta < gamma_proxy / 4.0)) v.emplace_back("delta must lie in (0, gamma_proxy/4)");
    if (compacts.empty()) v.emplace_back("at least one compact set is required");
    for (double g : gammas)
        if (!(g > 0.0 && g < 1.0)) v.emplace_back("higher integrability exponents must lie in (0, 1)");
    if (plan.points.empty()) v.emplace_back("sampling plan has no points");
    if (v.empty()) return;
    std::ostringstream os;
    for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "; " : "") << v[k];
    throw ConfigurationError(os.str());
}

std::vector<MetricRow> convergence_metrics(const std::vector<DiscreteField>& u_list, const DiscreteField& u_limit,
                                           const PhiFunction& phi, double delta, double alpha,
                                           const std::vector<Box>& compacts) {
    std::vector<MetricRow> rows;
    rows.reserve(u_list.size());
    for (const auto& u : u_list) {
        if (!u.same_mesh(u_limit)) throw MeshMismatch("convergence metrics need a common mesh");
        MetricRow row;
        row.sobolev = sobolev_distance(phi, u, u_limit, delta);
        const DiscreteField diff = u - u_limit;
        for (const auto& k : compacts) row.holder.push_back(holder_seminorm(diff, k, alpha).total());
        rows.push_back(std::move(row));
    }
    return rows;
}

double spread(const std::vector<double>& values) {
    double lo = kInf;
    double hi = 0.0;
    bool zero = false;
    for (double v : values) {
        if (!std::isfinite(v)) return kInf;
        if (v == 0.0) {
            zero = true;
            continue;
        }
        lo = std::min(lo, std::abs(v));
        hi = std::max(hi, std::abs(v));
    }
    if (hi == 0.0) return 1.0;
    return zero ? kInf : hi / lo;
}

StabilityReport run_experiment(const StabilityExperiment& exp) {
    exp.validate();
    const MeshPtr mesh = build_mesh(exp.domain, exp.resolution);
    const OperatorHandle base = canonical_operator(exp.phi);
    const DiscreteField f = DiscreteField::interpolate(mesh, exp.f);
    std::optional<DiscreteField> psi;
    if (exp.psi) psi = DiscreteField::interpolate(mesh, *exp.psi);

    StabilityReport rep;
    rep.id = exp.id;
    rep.resolution = mesh->resolution();
    rep.theta = exp.theta ? *exp.theta : theta_schedule(exp.gamma_proxy, exp.delta);

    const ObstacleProblem limit_pb{mesh, exp.phi, base, f, psi, exp.solver};
    const SolveResult limit = solve_or_throw(limit_pb, "limit problem");
    rep.limit_solve = diagnostics(limit);
    rep.limit_energy_bound = energy_bound_check(exp.phi, limit.u, f, psi);
    rep.limit_higher_integrability = higher_integrability_margin(exp.phi, limit.u, f, psi, exp.gammas);

    SamplingPlan stretched = exp.plan;
    stretched.t_max *= 10.0;
    stretched.t_count += static_cast<int>(std::ceil((exp.plan.t_count - 1) / std::log10(exp.plan.t_max / exp.plan.t_min)));

    std::vector<DiscreteField> solutions;
    for (int i = 1; i <= exp.i_max; ++i) {
        const OperatorHandle op = perturbed_operator(base, i, exp.perturbation);
        const ObstacleProblem pb{mesh, op.phi(), op, f, psi, exp.solver};
        const SolveResult r = solve_or_throw(pb, "perturbation index " + std::to_string(i));

        StabilityRow row;
        row.index = i;
        row.epsilon = op.epsilon();
        row.operator_gap = convergence_gap(op, base, exp.compacts.front(), exp.t_cap, exp.plan);
        row.domination = domination_constant(op.phi(), exp.phi, rep.theta, exp.t0, exp.plan);
        const DominationResult wide = domination_constant(op.phi(), exp.phi, rep.theta, exp.t0, stretched);
        row.domination_bounded = wide.l_forward <= row.domination.l_forward * (1.0 + 1e-9) &&
                                 wide.l_backward <= row.domination.l_backward * (1.0 + 1e-9);
        row.energy_bound = energy_bound_check(op.phi(), r.u, f, psi);
        row.higher_integrability = higher_integrability_margin(op.phi(), r.u, f, psi, exp.gammas);
        row.solve = diagnostics(r);
        solutions.push_back(r.u);
        rep.rows.push_back(std::move(row));
    }

    const auto metrics = convergence_metrics(solutions, limit.u, exp.phi, exp.delta, exp.alpha, exp.compacts);
    for (std::size_t k = 0; k < metrics.size(); ++k) rep.rows[k].metrics = metrics[k];

    const auto& first = rep.rows.front().metrics;
    const auto& last = rep.rows.back().metrics;
    rep.sobolev_ratio = last_over_first(first.sobolev.modular_gap, last.sobolev.modular_gap);
    rep.sobolev_monotone = true;
    for (std::size_t k = 1; k < rep.rows.size(); ++k)
        if (rep.rows[k].metrics.sobolev.modular_gap >
            rep.rows[k - 1].metrics.sobolev.modular_gap + 2.0 * exp.solver.tol_pg)
            rep.sobolev_monotone = false;
    rep.sobolev_pass = rep.sobolev_monotone && rep.sobolev_ratio <= exp.rho_target;
    rep.holder_pass = true;
    for (std::size_t c = 0; c < exp.compacts.size(); ++c) {
        rep.holder_ratios.push_back(last_over_first(first.holder[c], last.holder[c]));
        if (!(rep.holder_ratios.back() <= exp.rho_target)) rep.holder_pass = false;
    }

    for (auto it = rep.rows.rbegin(); it != rep.rows.rend() && it->domination_bounded; ++it) rep.i_theta = it->index;
    return rep;
}

}  // namespace orlicz
