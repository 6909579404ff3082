#include <gtest/gtest.h>

#include <cmath>

#include "../support/fixtures.hpp"
#include "orlicz/error.hpp"

using namespace orlicz;
using namespace orlicz::testing;

namespace {

std::vector<double> psi_values(const ObstacleProblem& pb) {
    const auto v = pb.psi->values();
    return {v.begin(), v.end()};
}

std::vector<double> u_values(const SolveResult& r) {
    const auto v = r.u.values();
    return {v.begin(), v.end()};
}

}  // namespace

TEST(SolveObstacle, QuadraticMatchesProjectedSor) {
    const auto pb = parabola_problem(64, PhiFunction::power(2.0));
    ASSERT_EQ(pb.mesh->node_count(), 65u);
    const auto res = solve_obstacle(pb);
    ASSERT_TRUE(res.converged) << res.message;
    const auto oracle = psor_oracle(psi_values(pb));
    EXPECT_LT(max_abs_diff(u_values(res), oracle), 1e-6);
}

TEST(SolveObstacle, CubicMatchesCoordinateDescent) {
    const auto pb = parabola_problem(32, PhiFunction::power(3.0));
    const auto res = solve_obstacle(pb);
    ASSERT_TRUE(res.converged) << res.message;
    const auto oracle = coordinate_descent_oracle(psi_values(pb), 3.0);
    EXPECT_LT(max_abs_diff(u_values(res), oracle), 1e-5);
}

TEST(SolveObstacle, FarObstacleGivesZero) {
    auto pb = parabola_problem(32, PhiFunction::power(2.0));
    pb.psi = DiscreteField::constant(pb.mesh, -1.0);
    const auto res = solve_obstacle(pb);
    ASSERT_TRUE(res.converged);
    for (double v : res.u.values()) EXPECT_EQ(v, 0.0);
}

TEST(SolveObstacle, FeasibleAndVariational) {
    for (double p : {2.0, 3.0, 1.6}) {
        const auto pb = parabola_problem(40, PhiFunction::power(p));
        const auto res = solve_obstacle(pb);
        ASSERT_TRUE(res.converged) << "p=" << p << ": " << res.message;
        for (std::size_t j = 0; j < pb.mesh->node_count(); ++j) {
            EXPECT_GE(res.u[j], (*pb.psi)[j]);
            if (pb.mesh->is_boundary(j)) EXPECT_EQ(res.u[j], pb.f[j]);
        }
        EXPECT_GE(res.vi_residual, -res.tol_vi);
        EXPECT_GT(res.probes, pb.mesh->node_count());
    }
}

TEST(SolveObstacle, EnergyNonIncreasing) {
    const auto pb = bump_problem_2d(12);
    const auto res = solve_obstacle(pb);
    ASSERT_TRUE(res.converged) << res.message;
    ASSERT_GE(res.energy_history.size(), 2u);
    for (std::size_t k = 1; k < res.energy_history.size(); ++k)
        EXPECT_LE(res.energy_history[k], res.energy_history[k - 1] * (1.0 + 1e-13));
    EXPECT_DOUBLE_EQ(res.energy, energy(pb.op, res.u));
}

TEST(SolveObstacle, IndependentOfStart) {
    for (auto pb : {parabola_problem(32, PhiFunction::power(3.0)), bump_problem_2d(10)}) {
        pb.solver.initial = InitialRule::max_f_psi;
        const auto a = solve_obstacle(pb);
        pb.solver.initial = InitialRule::lifted_constant;
        const auto b = solve_obstacle(pb);
        ASSERT_TRUE(a.converged && b.converged);
        EXPECT_LE(max_abs_diff(u_values(a), u_values(b)), 10.0 * pb.solver.tol_pg);
    }
}

TEST(SolveObstacle, ComparisonInObstacle) {
    auto low = bump_problem_2d(10);
    auto high = low;
    high.psi = field(high.mesh, "0.35 - 3*((x - 0.5)^2 + (y - 0.5)^2)");
    const auto a = solve_obstacle(low);
    const auto b = solve_obstacle(high);
    ASSERT_TRUE(a.converged && b.converged);
    for (std::size_t j = 0; j < low.mesh->node_count(); ++j) EXPECT_LE(a.u[j], b.u[j] + 10.0 * low.solver.tol_pg);
}

TEST(SolveObstacle, InactiveObstacleIsUnconstrained) {
    auto pb = bump_problem_2d(10);
    pb.f = field(pb.mesh, "1 + x*y");
    pb.psi = DiscreteField::constant(pb.mesh, 0.0);
    const auto constrained = solve_obstacle(pb);
    pb.psi.reset();
    const auto free = solve_obstacle(pb);
    ASSERT_TRUE(constrained.converged && free.converged);
    EXPECT_LE(max_abs_diff(u_values(constrained), u_values(free)), 10.0 * pb.solver.tol_pg);
}

TEST(SolveObstacle, MultiplierLawSolvesWithVariationalResidual) {
    auto pb = bump_problem_2d(10);
    pb.op = perturbed_operator(pb.op, 1, Perturbation{PerturbationLaw::multiplier, ScalarField::from_expression("sin(4*x)")});
    const auto res = solve_obstacle(pb);
    ASSERT_TRUE(res.converged) << res.message;
    EXPECT_GE(res.vi_residual, -res.tol_vi);
}

TEST(SolveObstacle, IterationCapIsReported) {
    auto pb = bump_problem_2d(10);
    pb.solver.max_iter = 1;
    const auto res = solve_obstacle(pb);
    EXPECT_FALSE(res.converged);
    EXPECT_FALSE(res.message.empty());
}

TEST(SolveObstacle, FixedStepRule) {
    auto pb = parabola_problem(32, PhiFunction::power(2.0));
    pb.solver.step_rule = StepRule::fixed;
    const auto res = solve_obstacle(pb);
    ASSERT_TRUE(res.converged) << res.message;
    EXPECT_LT(max_abs_diff(u_values(res), psor_oracle(psi_values(pb))), 1e-6);
}

TEST(SolveObstacle, Infeasible) {
    auto pb = parabola_problem(16, PhiFunction::power(2.0));
    pb.psi = DiscreteField::constant(pb.mesh, 0.5);
    EXPECT_THROW(solve_obstacle(pb), InfeasibleProblem);
    auto other = parabola_problem(8, PhiFunction::power(2.0));
    pb.psi = other.psi;
    EXPECT_THROW(solve_obstacle(pb), MeshMismatch);
}

TEST(ViResidual, Examples) {
    const auto pb = parabola_problem(32, PhiFunction::power(2.0));
    const auto res = solve_obstacle(pb);
    EXPECT_NEAR(vi_residual(pb.op, res.u, res.u), 0.0, 1e-15);
    EXPECT_GE(vi_residual(pb.op, res.u, initial_point(pb, InitialRule::lifted_constant), &pb), -res.tol_vi);
    // psi itself is admissible, and for u = 0 the residual is zero for any w.
    const auto zero = DiscreteField::constant(pb.mesh, 0.0);
    EXPECT_EQ(vi_residual(pb.op, zero, *pb.psi), 0.0);
    // w = 0 violates w >= psi.
    EXPECT_THROW(vi_residual(pb.op, res.u, zero, &pb), PreconditionError);
}

TEST(ViResidual, ClosedForm) {
    // A(u') = 2u' = 2 and the integral of (w - u)' is [w - u] over the endpoints.
    auto mesh = build_mesh(DomainSpec::interval(0.0, 1.0), 10);
    const auto op = canonical_operator(PhiFunction::power(2.0));
    EXPECT_NEAR(vi_residual(op, field(mesh, "x"), field(mesh, "x^2")), 0.0, 1e-14);
    EXPECT_NEAR(vi_residual(op, field(mesh, "x"), field(mesh, "2*x")), 2.0, 1e-14);
}

TEST(Supersolution, HatsAtSolution) {
    const auto pb = parabola_problem(32, PhiFunction::power(2.0));
    const auto res = solve_obstacle(pb);
    std::vector<DiscreteField> hats;
    for (std::size_t j = 1; j + 1 < pb.mesh->node_count(); ++j) hats.push_back(hat_function(pb.mesh, j));
    const auto rep = supersolution_check(pb.op, res.u, hats, res.tol_vi);
    EXPECT_TRUE(rep.pass());
    EXPECT_EQ(rep.integrals.size(), hats.size());
}

TEST(Supersolution, ZeroAndStrictSubsolution) {
    auto mesh = build_mesh(DomainSpec::interval(0.0, 1.0), 20);
    const auto op = canonical_operator(PhiFunction::power(2.0));
    std::vector<DiscreteField> hats;
    for (std::size_t j = 1; j + 1 < mesh->node_count(); ++j) hats.push_back(hat_function(mesh, j));
    const auto zero = supersolution_check(op, DiscreteField::constant(mesh, 0.0), hats, 1e-12);
    EXPECT_TRUE(zero.pass());
    EXPECT_EQ(zero.min_integral, 0.0);
    // -x(1-x) has -u'' = -2 < 0.
    const auto sub = supersolution_check(op, field(mesh, "-x*(1 - x)"), hats, 1e-12);
    EXPECT_FALSE(sub.pass());
    EXPECT_EQ(sub.violations.size(), hats.size());
    EXPECT_THROW(supersolution_check(op, DiscreteField::constant(mesh, 0.0), {DiscreteField::constant(mesh, 1.0)}, 1e-12),
                 PreconditionError);
}

TEST(Quasiminimizer, Ratios) {
    auto pb = bump_problem_2d(10);
    pb.psi.reset();
    pb.f = field(pb.mesh, "x^2 - y^2");
    pb.phi = PhiFunction::power(2.0);
    pb.op = canonical_operator(pb.phi);
    const auto res = solve_obstacle(pb);
    ASSERT_TRUE(res.converged);
    EXPECT_THROW(quasiminimizer_ratio(pb.phi, res.u, res.u, {}), UndefinedRatio);

    std::vector<double> bumped(res.u.values().begin(), res.u.values().end());
    for (std::size_t j = 0; j < bumped.size(); ++j)
        if (!pb.mesh->is_boundary(j)) bumped[j] += 0.1 * std::sin(3.0 * j);
    const DiscreteField v(pb.mesh, bumped);
    EXPECT_LE(quasiminimizer_ratio(pb.phi, res.u, v, {}), 1.0 + 1e-8);
}
