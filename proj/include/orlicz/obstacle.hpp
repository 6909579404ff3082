#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orlicz/mesh.hpp"
#include "orlicz/operator.hpp"

namespace orlicz {

enum class StepRule { fixed, backtracking };
enum class InitialRule { max_f_psi, lifted_constant };
const char* to_string(StepRule r) noexcept;
const char* to_string(InitialRule r) noexcept;
StepRule parse_step_rule(const std::string& s);
InitialRule parse_initial_rule(const std::string& s);

struct SolverConfig {
    int max_iter = 500;
    double tol_pg = 1e-9;      ///< max-norm of u - P(u - grad E)
    double tol_vi_rel = 1e-8;  ///< tol_vi = tol_vi_rel * (1 + E(u))
    StepRule step_rule = StepRule::backtracking;
    double fixed_step = 1.0;
    InitialRule initial = InitialRule::max_f_psi;
    double armijo = 1e-4;
    double eps_grad = 1e-12;   ///< floor on |grad u| inside direction factors
    double hessian_floor = 1e-8;

    /// tol_pg 1e-9 in 1D and 1e-7 in 2D.
    static SolverConfig defaults(int dimension);
};

struct ObstacleProblem {
    MeshPtr mesh;
    PhiFunction phi;
    OperatorHandle op;
    DiscreteField f;
    std::optional<DiscreteField> psi;  ///< absent: unconstrained
    SolverConfig solver;
};

struct SolveResult {
    explicit SolveResult(DiscreteField start) : u(std::move(start)) {}

    DiscreteField u;
    int iterations = 0;
    double pg_norm = 0.0;
    double last_step = 0.0;
    double vi_residual = 0.0;  ///< minimum over the probe family
    double tol_vi = 0.0;
    std::size_t probes = 0;
    double energy = 0.0;
    std::vector<double> energy_history;  ///< E(u^k) at every accepted iterate
    bool converged = false;
    std::string message;
};

/// Discrete energy sum |c| F(x_c, |grad u|_c) with F the operator potential.
double energy(const OperatorHandle& op, const DiscreteField& u);

/// Nodal gradient of `energy`, i.e. the discrete form of A(x, grad u).
std::vector<double> energy_gradient(const OperatorHandle& op, const DiscreteField& u, double eps_grad = 1e-12);

/// Throws InfeasibleProblem unless psi <= f on the boundary and the fields
/// share the mesh.
void check_admissible(const ObstacleProblem& problem);

/// The feasible start max(f, psi) (or the lifted constant) with boundary f.
DiscreteField initial_point(const ObstacleProblem& problem, InitialRule rule);

SolveResult solve_obstacle(const ObstacleProblem& problem);

/// Centroid-rule value of the integral of A(x, grad u) . grad(w - u).
/// When `problem` is given, w must be admissible for it.
double vi_residual(const OperatorHandle& op, const DiscreteField& u, const DiscreteField& w,
                   const ObstacleProblem* problem = nullptr, double tol = 1e-12);

/// Minimum VI residual over up/down nodal hats, max(f, psi), the lifted
/// constant and the chord between u and max(f, psi).
struct ProbeSummary {
    double min_residual = 0.0;
    std::size_t count = 0;
};
ProbeSummary probe_vi(const ObstacleProblem& problem, const DiscreteField& u);

/// Nodal hat function of `node` scaled to `height`.
DiscreteField hat_function(const MeshPtr& mesh, std::size_t node, double height = 1.0);

struct SupersolutionReport {
    std::vector<double> integrals;
    std::vector<std::size_t> violations;  ///< probe indices with integral < -tol
    double min_integral = 0.0;
    bool pass() const noexcept { return violations.empty(); }
};
/// Integral of A(x, grad u) . grad w for non-negative probes w vanishing on the boundary.
SupersolutionReport supersolution_check(const OperatorHandle& op, const DiscreteField& u,
                                        const std::vector<DiscreteField>& probes, double tol);

/// Ratio of phi-modulars of grad u and grad v over the cells of `region`
/// where the gradients differ.
double quasiminimizer_ratio(const PhiFunction& phi, const DiscreteField& u, const DiscreteField& v,
                            const std::vector<std::size_t>& region);

}  // namespace orlicz
