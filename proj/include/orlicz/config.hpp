#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/inequalities.hpp"
#include "orlicz/obstacle.hpp"
#include "orlicz/stability.hpp"

namespace orlicz {

/// Validated experiment description read from an INI document with sections
/// experiment, domain, mesh, phi, operator, data, conditions, solver, output.
struct ExperimentConfig {
    std::string id;
    std::uint64_t seed = 1234;

    DomainSpec domain = DomainSpec::interval(0.0, 1.0);
    int resolution = 32;

    PhiFunction phi = PhiFunction::power(2.0);
    double ainc_p = 0.0;  ///< exponents claimed for the growth certificate
    double adec_q = 0.0;

    Perturbation perturbation;
    int i_max = 8;
    double t_cap = 10.0;

    std::string f_text = "0";
    std::optional<std::string> psi_text;

    // conditions
    int spatial_samples = 16;
    double t_min = 1e-2;
    double t_max = 1e2;
    int t_count = 32;
    int directions = 16;
    double beta_min = 1e-3;
    std::vector<double> a1_radii;
    double a1_beta_min = 0.1;
    double ceiling = 1.05;
    std::optional<double> theta;
    double t0 = 1.0;
    double gamma_proxy = 0.4;
    double delta = 0.05;
    double alpha = 0.25;
    double rho_target = 0.1;
    std::vector<Box> compacts;
    std::vector<double> gammas{0.1, 0.25, 0.5};
    std::vector<Ball> balls;
    std::vector<Ball> boundary_balls;

    SolverConfig solver = SolverConfig::defaults(1);

    std::filesystem::path out_dir = "out";
    std::string csv_name = "report.csv";
    std::string field_name = "solution.txt";
};

/// Reads and validates; throws SchemaError carrying every violation found,
/// or ConfigurationError when the file cannot be read.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::istream& in);

/// Spatial points spread over the domain's bounding box (kept inside the
/// domain), with the configured t-grid and seed.
SamplingPlan sampling_plan(const ExperimentConfig& cfg);

/// The unperturbed obstacle problem on the configured mesh.
ObstacleProblem make_problem(const ExperimentConfig& cfg);

StabilityExperiment make_experiment(const ExperimentConfig& cfg);

}  // namespace orlicz
