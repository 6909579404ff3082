#include "orlicz/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "orlicz/error.hpp"

namespace orlicz {

namespace {

struct RowSink {
    const ExperimentConfig& cfg;
    std::vector<ReportRow> rows;

    void add(std::string metric, double value, bool pass, int index = 0) {
        rows.push_back({cfg.id, index, cfg.resolution, std::move(metric), value, pass});
    }
};

std::string with_gamma(const std::string& name, double gamma) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, gamma);
    return name + "[gamma=" + std::string(buf, r.ptr) + "]";
}

void add_report(RowSink& sink, const std::string& name, const InequalityReport& r, int index) {
    sink.add(name + ".lhs", r.lhs, std::isfinite(r.lhs), index);
    sink.add(name + ".rhs", r.rhs, std::isfinite(r.rhs), index);
    sink.add(name + ".ratio", r.ratio, r.finite(), index);
}

SolveResult solve_checked(const ObstacleProblem& pb) {
    SolveResult r = solve_obstacle(pb);
    if (!r.converged) throw NotConverged("obstacle solve: " + r.message);
    return r;
}

}  // namespace

Command parse_command(std::string_view name) {
    if (name == "certify") return Command::certify;
    if (name == "solve") return Command::solve;
    if (name == "inequalities") return Command::inequalities;
    if (name == "stability") return Command::stability;
    throw ConfigurationError("unknown subcommand '" + std::string(name) + "'");
}

const char* to_string(Command c) noexcept {
    switch (c) {
        case Command::certify: return "certify";
        case Command::solve: return "solve";
        case Command::inequalities: return "inequalities";
        case Command::stability: return "stability";
    }
    return "unknown";
}

std::vector<ReportRow> certify_rows(const ExperimentConfig& cfg) {
    RowSink sink{cfg, {}};
    const SamplingPlan plan = sampling_plan(cfg);

    const auto a0 = certify_a0(cfg.phi, plan, cfg.beta_min);
    sink.add("a0.beta", a0.measured, a0.pass);
    const auto rates = certify_ainc_adec(cfg.phi, cfg.ainc_p, cfg.adec_q, plan, cfg.ceiling);
    sink.add("ainc.L_p", rates.parameters.at("L_p"), rates.pass);
    sink.add("adec.L_q", rates.parameters.at("L_q"), rates.pass);
    if (!cfg.a1_radii.empty()) {
        const auto a1 = certify_a1(cfg.phi, plan, cfg.a1_radii, cfg.a1_beta_min);
        sink.add("a1.beta", a1.measured, a1.pass);
    }
    try {
        const auto a2 = certify_a2(cfg.phi, canonical_a2_witness(cfg.phi), plan);
        sink.add("a2.excess", a2.measured, a2.pass);
    } catch (const UnsupportedOperation&) {
        // No shipped witness for this family; nothing to certify.
    }
    const auto young = check_young(cfg.phi, plan);
    sink.add("young.violations", static_cast<double>(young.violations + young.convex_violations), young.pass());

    const auto st = certify_structure(canonical_operator(cfg.phi), cfg.phi, plan, cfg.directions, cfg.seed);
    sink.add("structure.c1", st.c1, st.pass);
    sink.add("structure.c2", st.c2, st.pass);
    sink.add("structure.margin", st.margin, st.pass);

    const auto density = measure_density_spot_check(cfg.domain, 1.0 / cfg.resolution, 2000, cfg.seed);
    sink.add("measure_density.min_fraction", density.min_fraction, density.pass);
    return sink.rows;
}

std::vector<ReportRow> solve_rows(const ExperimentConfig& cfg, const std::filesystem::path& field_path) {
    RowSink sink{cfg, {}};
    const ObstacleProblem pb = make_problem(cfg);
    const SolveResult r = solve_obstacle(pb);
    const Mesh& mesh = *pb.mesh;

    double gap = std::numeric_limits<double>::infinity();
    double pinned = 0.0;
    for (std::size_t j = 0; j < mesh.node_count(); ++j) {
        if (pb.psi) gap = std::min(gap, r.u[j] - (*pb.psi)[j]);
        if (mesh.is_boundary(j)) pinned = std::max(pinned, std::abs(r.u[j] - pb.f[j]));
    }
    sink.add("solve.converged", r.converged ? 1.0 : 0.0, r.converged);
    sink.add("solve.iterations", r.iterations, r.converged);
    sink.add("solve.pg_norm", r.pg_norm, r.pg_norm <= cfg.solver.tol_pg);
    sink.add("solve.energy", r.energy, std::isfinite(r.energy));
    sink.add("solve.vi_residual", r.vi_residual, r.converged && r.vi_residual >= -r.tol_vi);
    sink.add("solve.tol_vi", r.tol_vi, true);
    if (pb.psi) sink.add("solve.min_u_minus_psi", gap, gap >= 0.0);
    sink.add("solve.boundary_error", pinned, pinned == 0.0);

    if (!field_path.empty()) {
        std::ofstream out(field_path);
        if (!out) throw ConfigurationError("cannot write field file '" + field_path.string() + "'");
        std::map<std::string, const DiscreteField*> fields{{"f", &pb.f}, {"u", &r.u}};
        if (pb.psi) fields.emplace("psi", &*pb.psi);
        write_fields(out, mesh, fields);
    }
    return sink.rows;
}

std::vector<ReportRow> inequality_rows(const ExperimentConfig& cfg) {
    RowSink sink{cfg, {}};
    const ObstacleProblem pb = make_problem(cfg);
    const SolveResult r = solve_checked(pb);
    const DiscreteField psi = pb.psi ? *pb.psi : DiscreteField::constant(pb.mesh, 0.0);

    for (std::size_t k = 0; k < cfg.balls.size(); ++k)
        add_report(sink, "caccioppoli_interior", caccioppoli_interior(pb.phi, r.u, psi, cfg.balls[k]),
                   static_cast<int>(k) + 1);
    for (std::size_t k = 0; k < cfg.boundary_balls.size(); ++k)
        add_report(sink, "caccioppoli_boundary", caccioppoli_boundary(pb.phi, r.u, pb.f, cfg.boundary_balls[k]),
                   static_cast<int>(k) + 1);
    add_report(sink, "energy_bound", energy_bound_check(pb.phi, r.u, pb.f, pb.psi), 0);
    for (const auto& hi : higher_integrability_margin(pb.phi, r.u, pb.f, pb.psi, cfg.gammas))
        add_report(sink, with_gamma("higher_integrability", hi.gamma), hi, 0);
    add_report(sink, "hardy", hardy_check(pb.phi, r.u - pb.f), 0);
    return sink.rows;
}

std::vector<ReportRow> stability_rows(const ExperimentConfig& cfg) {
    RowSink sink{cfg, {}};
    const StabilityExperiment exp = make_experiment(cfg);
    const StabilityReport rep = run_experiment(exp);

    // Every phi_i must itself satisfy the growth conditions.
    const OperatorHandle base = canonical_operator(cfg.phi);
    for (int i = 1; i <= cfg.i_max; ++i) {
        const PhiFunction phi_i = perturbed_operator(base, i, cfg.perturbation).phi();
        const auto a0 = certify_a0(phi_i, exp.plan, cfg.beta_min);
        sink.add("phi_i.a0.beta", a0.measured, a0.pass, i);
        const auto rates = certify_ainc_adec(phi_i, phi_i.declared_p(), phi_i.declared_q(), exp.plan, cfg.ceiling);
        sink.add("phi_i.ainc_adec.L", rates.measured, rates.pass, i);
    }

    double max_energy = 0.0;
    std::vector<double> max_hi(cfg.gammas.size(), 0.0);
    for (const auto& row : rep.rows) {
        const int i = row.index;
        const auto& m = row.metrics;
        sink.add("sobolev.modular", m.sobolev.modular_gap, std::isfinite(m.sobolev.modular_gap), i);
        sink.add("sobolev.luxemburg", m.sobolev.norm_gap, std::isfinite(m.sobolev.norm_gap), i);
        for (std::size_t k = 0; k < m.holder.size(); ++k)
            sink.add("holder.K" + std::to_string(k + 1), m.holder[k], std::isfinite(m.holder[k]), i);
        sink.add("operator_gap", row.operator_gap, std::isfinite(row.operator_gap), i);
        sink.add("domination.forward", row.domination.l_forward, std::isfinite(row.domination.l_forward), i);
        sink.add("domination.backward", row.domination.l_backward, std::isfinite(row.domination.l_backward), i);
        sink.add("domination.bounded", row.domination_bounded ? 1.0 : 0.0, true, i);
        sink.add("energy_bound.ratio", row.energy_bound.ratio, row.energy_bound.finite(), i);
        max_energy = std::max(max_energy, row.energy_bound.ratio);
        for (std::size_t g = 0; g < row.higher_integrability.size(); ++g) {
            const auto& hi = row.higher_integrability[g];
            sink.add(with_gamma("higher_integrability.ratio", hi.gamma), hi.ratio, hi.finite(), i);
            max_hi[g] = std::max(max_hi[g], hi.ratio);
        }
        sink.add("solve.iterations", row.solve.iterations, row.solve.converged, i);
    }

    sink.add("theta", rep.theta, true);
    sink.add("i_theta", rep.i_theta, true);
    sink.add("sobolev.monotone", rep.sobolev_monotone ? 1.0 : 0.0, rep.sobolev_monotone);
    sink.add("sobolev.final_over_first", rep.sobolev_ratio, rep.sobolev_pass);
    for (std::size_t k = 0; k < rep.holder_ratios.size(); ++k)
        sink.add("holder.K" + std::to_string(k + 1) + ".final_over_first", rep.holder_ratios[k],
                 rep.holder_ratios[k] <= cfg.rho_target);
    // Sequence uniformity: no index exceeds twice the limit problem's ratio.
    const double e_lim = rep.limit_energy_bound.ratio;
    sink.add("energy_bound.max_over_limit", max_energy / e_lim, max_energy <= 2.0 * e_lim || max_energy == 0.0);
    for (std::size_t g = 0; g < max_hi.size(); ++g) {
        const double lim = rep.limit_higher_integrability[g].ratio;
        sink.add(with_gamma("higher_integrability.max_over_limit", cfg.gammas[g]), lim > 0.0 ? max_hi[g] / lim : 0.0,
                 max_hi[g] <= 2.0 * lim || max_hi[g] == 0.0);
    }
    return sink.rows;
}

std::vector<ReportRow> run_command(Command command, const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<ReportRow> rows;
    switch (command) {
        case Command::certify: rows = certify_rows(cfg); break;
        case Command::solve: rows = solve_rows(cfg, cfg.out_dir / cfg.field_name); break;
        case Command::inequalities: rows = inequality_rows(cfg); break;
        case Command::stability: rows = stability_rows(cfg); break;
    }
    const auto csv = cfg.out_dir / cfg.csv_name;
    std::ofstream out(csv);
    if (!out) throw ConfigurationError("cannot write report '" + csv.string() + "'");
    write_csv(out, rows);
    return rows;
}

}  // namespace orlicz
