#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orlicz/certification.hpp"
#include "orlicz/inequalities.hpp"
#include "orlicz/metrics.hpp"
#include "orlicz/obstacle.hpp"

namespace orlicz {

/// theta with (1 + gamma/4)(1 + theta) = 1 + gamma/2; needs 0 < delta < gamma/4.
double theta_schedule(double gamma_proxy, double delta);

/// A perturbation sequence (phi_i, A_i) -> (phi, A), i = 1..i_max, on one mesh.
struct StabilityExperiment {
    std::string id = "experiment";
    DomainSpec domain = DomainSpec::interval(0.0, 1.0);
    int resolution = 32;
    PhiFunction phi = PhiFunction::power(2.0);
    Perturbation perturbation;
    int i_max = 8;
    ScalarField f = ScalarField::constant(0.0);
    std::optional<ScalarField> psi;

    double delta = 0.05;
    double alpha = 0.25;
    double gamma_proxy = 0.4;
    std::optional<double> theta;  ///< defaults to theta_schedule(gamma_proxy, delta)
    double t0 = 1.0;
    double t_cap = 10.0;          ///< |xi| range for the operator gap
    double rho_target = 0.1;
    std::vector<Box> compacts;
    std::vector<double> gammas{0.1, 0.25, 0.5};
    SamplingPlan plan;            ///< points and t-grid for domination and operator gaps
    SolverConfig solver = SolverConfig::defaults(1);

    /// Throws ConfigurationError listing every violated invariant.
    void validate() const;
};

struct MetricRow {
    SobolevGap sobolev;
    std::vector<double> holder;  ///< C^{0,alpha}(K) norm of u_i - u per compact
};

/// Distances of each u_i to u_limit; all fields must share u_limit's mesh.
std::vector<MetricRow> convergence_metrics(const std::vector<DiscreteField>& u_list, const DiscreteField& u_limit,
                                           const PhiFunction& phi, double delta, double alpha,
                                           const std::vector<Box>& compacts);

struct SolveDiagnostics {
    int iterations = 0;
    double pg_norm = 0.0;
    double vi_residual = 0.0;
    double tol_vi = 0.0;
    double energy = 0.0;
    bool converged = false;
};

struct StabilityRow {
    int index = 0;
    double epsilon = 0.0;
    MetricRow metrics;
    double operator_gap = 0.0;
    DominationResult domination;
    /// Same sup with the t-grid stretched tenfold; true when it did not grow.
    bool domination_bounded = false;
    InequalityReport energy_bound;
    std::vector<InequalityReport> higher_integrability;
    SolveDiagnostics solve;
};

struct StabilityReport {
    std::string id;
    int resolution = 0;
    double theta = 0.0;
    SolveDiagnostics limit_solve;
    InequalityReport limit_energy_bound;
    std::vector<InequalityReport> limit_higher_integrability;
    std::vector<StabilityRow> rows;  ///< ordered by index

    double sobolev_ratio = 0.0;               ///< last / first modular distance
    std::vector<double> holder_ratios;        ///< last / first per compact
    bool sobolev_monotone = false;            ///< non-increasing up to 2 tol_pg
    bool sobolev_pass = false;
    bool holder_pass = false;
    /// First index from which every later domination check stayed bounded (0 if none).
    int i_theta = 0;
    bool pass() const noexcept { return sobolev_pass && holder_pass; }
};

/// Solves the limit problem and every perturbed problem. Throws NotConverged
/// naming the index when a solve fails.
StabilityReport run_experiment(const StabilityExperiment& exp);

/// max / min of positive finite values, 1 for an empty or all-zero list and
/// +inf when the list mixes zero and positive values.
double spread(const std::vector<double>& values);

}  // namespace orlicz
