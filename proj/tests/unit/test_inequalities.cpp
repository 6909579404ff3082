#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../support/fixtures.hpp"
#include "orlicz/error.hpp"
#include "orlicz/inequalities.hpp"

using namespace orlicz;
using namespace orlicz::testing;

namespace {

MeshPtr unit_interval(int n) { return build_mesh(DomainSpec::interval(0.0, 1.0), n); }

// Composite Simpson rule on [a, b].
template <class F>
double simpson(F f, double a, double b, int n = 2000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return s * h / 3.0;
}

}  // namespace

TEST(BallPoints, Measures) {
    const auto m1 = unit_interval(10);
    double w = 0.0;
    for (const auto& p : ball_points(*m1, Ball{{0.05}, 0.2})) w += p.weight;
    EXPECT_NEAR(w, 0.25, 1e-15);

    const auto m2 = build_mesh(DomainSpec::unit_square(), 32);
    w = 0.0;
    for (const auto& p : ball_points(*m2, Ball{{0.5, 0.5}, 0.2})) w += p.weight;
    EXPECT_NEAR(w / (std::numbers::pi * 0.04), 1.0, 5e-3);
    EXPECT_THROW(ball_points(*m2, Ball{{0.5, 0.5}, 0.0}), PreconditionError);
}

TEST(CaccioppoliInterior, LinearClosedForm) {
    const auto mesh = unit_interval(64);
    const auto phi = PhiFunction::power(2.0);
    const auto rep = caccioppoli_interior(phi, field(mesh, "x"), DiscreteField::constant(mesh, -10.0), Ball{{0.5}, 0.1});
    const double oracle = simpson([](double x) { return std::pow((x - 0.5) / 0.4, 2); }, 0.3, 0.7) / 0.4;
    EXPECT_NEAR(oracle, 1.0 / 12.0, 1e-14);
    EXPECT_NEAR(rep.lhs, 1.0, 1e-13);
    EXPECT_NEAR(rep.rhs, oracle, 1e-13);
    EXPECT_NEAR(rep.ratio, 12.0, 1e-11);
    EXPECT_EQ(rep.resolution, 64);
}

TEST(CaccioppoliInterior, ConstantAndGeometry) {
    const auto mesh = unit_interval(32);
    const auto phi = PhiFunction::power(2.0);
    const auto c = DiscreteField::constant(mesh, 3.0);
    EXPECT_EQ(caccioppoli_interior(phi, c, c, Ball{{0.5}, 0.1}).ratio, 0.0);
    EXPECT_THROW(caccioppoli_interior(phi, c, c, Ball{{0.2}, 0.15}), GeometryError);

    const auto sq = build_mesh(DomainSpec::l_shape(), 16);
    const auto z = DiscreteField::constant(sq, 0.0);
    // The re-entrant corner (0.5, 0.5) is at distance sqrt(0.02) from (0.4, 0.4).
    EXPECT_THROW(caccioppoli_interior(phi, z, z, Ball{{0.4, 0.4}, 0.08}), GeometryError);
    EXPECT_NO_THROW(caccioppoli_interior(phi, z, z, Ball{{0.4, 0.4}, 0.07}));
}

TEST(CaccioppoliInterior, ContactSetOfSolvedProblem) {
    // The contact set is about (0.354, 0.646); on 2B = (0.4, 0.6) u = psi.
    std::vector<double> ratios;
    for (int n : {64, 128}) {
        const auto pb = parabola_problem(n, PhiFunction::power(2.0));
        const auto res = solve_obstacle(pb);
        ASSERT_TRUE(res.converged);
        const auto rep = caccioppoli_interior(pb.phi, res.u, *pb.psi, Ball{{0.5}, 0.05});
        // Mean over B of the squared cellwise slopes of the interpolated obstacle.
        double oracle = 0.0;
        for (int k = 0; k < n; ++k) {
            const double a = double(k) / n;
            const double b = double(k + 1) / n;
            const double overlap = std::max(0.0, std::min(b, 0.55) - std::max(a, 0.45));
            const double slope = -4.0 * ((b - 0.5) * (b - 0.5) - (a - 0.5) * (a - 0.5)) / (b - a);
            oracle += overlap * slope * slope / 0.1;
        }
        EXPECT_NEAR(rep.lhs, oracle, 1e-6 * oracle);
        ASSERT_TRUE(rep.finite());
        ratios.push_back(rep.ratio);
    }
    EXPECT_NEAR(refinement_ratio(ratios[0], ratios[1]), 1.0, 0.1);
}

TEST(CaccioppoliBoundary, Examples) {
    const auto mesh = unit_interval(40);
    const auto phi = PhiFunction::power(2.0);
    const auto f = field(mesh, "1 + x");
    const auto rep = caccioppoli_boundary(phi, f, f, Ball{{0.1}, 0.1});
    EXPECT_NEAR(rep.lhs, 1.0, 1e-13);
    EXPECT_NEAR(rep.rhs, 0.75, 1e-13);
    EXPECT_NEAR(rep.ratio, 4.0 / 3.0, 1e-12);

    const auto z = DiscreteField::constant(mesh, 0.0);
    EXPECT_EQ(caccioppoli_boundary(phi, z, z, Ball{{0.0}, 0.1}).ratio, 0.0);
    EXPECT_THROW(caccioppoli_boundary(phi, z, z, Ball{{0.5}, 0.1}), PreconditionError);
    EXPECT_THROW(caccioppoli_boundary(phi, z, z, Ball{{1.5}, 0.1}), PreconditionError);
}

TEST(CaccioppoliBoundary, SolvedProblemStable) {
    std::vector<double> ratios;
    for (int n : {32, 64, 128}) {
        const auto pb = parabola_problem(n, PhiFunction::power(2.0));
        const auto res = solve_obstacle(pb);
        const auto rep = caccioppoli_boundary(pb.phi, res.u, pb.f, Ball{{0.0}, 0.1});
        ASSERT_TRUE(rep.finite());
        EXPECT_GT(rep.ratio, 0.0);
        ratios.push_back(rep.ratio);
    }
    EXPECT_NEAR(refinement_ratio(ratios[0], ratios[2]), 1.0, 0.2);
}

TEST(EnergyBound, Examples) {
    auto pb = bump_problem_2d(8);
    pb.phi = PhiFunction::power(2.0);
    pb.op = canonical_operator(pb.phi);
    pb.f = field(pb.mesh, "1 + 2*x - y");
    pb.psi = DiscreteField::constant(pb.mesh, -5.0);
    const auto res = solve_obstacle(pb);
    const auto r1 = energy_bound_check(pb.phi, res.u, pb.f, pb.psi);
    EXPECT_NEAR(r1.ratio, 1.0, 1e-10);
    EXPECT_TRUE(r1.note.empty());

    const auto mesh = unit_interval(16);
    const auto z = DiscreteField::constant(mesh, 0.0);
    EXPECT_EQ(energy_bound_check(pb.phi, z, z, DiscreteField::constant(mesh, -1.0)).ratio, 0.0);
}

TEST(EnergyBound, ReductionRecoversFiniteRatio) {
    const auto pb = parabola_problem(64, PhiFunction::power(2.0));
    const auto res = solve_obstacle(pb);
    const auto bare = energy_bound_check(pb.phi, res.u, pb.f);
    EXPECT_GT(bare.lhs, 0.0);
    EXPECT_EQ(bare.rhs, 0.0);
    EXPECT_TRUE(std::isinf(bare.ratio));
    EXPECT_FALSE(bare.finite());
    EXPECT_FALSE(bare.note.empty());

    const auto reduced = energy_bound_check(pb.phi, res.u, pb.f, pb.psi);
    EXPECT_TRUE(reduced.finite());
    EXPECT_NE(reduced.note.find("max(f, psi)"), std::string::npos);
    // u minimises the energy among admissible functions and max(0, psi) is one of them.
    EXPECT_LE(reduced.ratio, 1.0 + 1e-12);
}

TEST(HigherIntegrability, Examples) {
    const auto mesh = unit_interval(16);
    const auto phi = PhiFunction::power(2.0);
    const auto u = field(mesh, "x");
    const auto reps = higher_integrability_margin(phi, u, u, std::nullopt, {0.5});
    ASSERT_EQ(reps.size(), 1u);
    EXPECT_NEAR(reps[0].lhs, 1.0, 1e-14);
    EXPECT_NEAR(reps[0].rhs, 3.0, 1e-14);
    EXPECT_LE(reps[0].ratio, 1.0);
    EXPECT_DOUBLE_EQ(reps[0].gamma, 0.5);

    const auto z = DiscreteField::constant(mesh, 0.0);
    EXPECT_EQ(higher_integrability_margin(phi, z, z, std::nullopt, {0.25})[0].lhs, 0.0);
    EXPECT_THROW(higher_integrability_margin(phi, z, z, std::nullopt, {1.0}), PreconditionError);
}

TEST(HigherIntegrability, StableUnderRefinement) {
    std::vector<std::vector<InequalityReport>> runs;
    for (int n : {32, 64}) {
        const auto pb = parabola_problem(n, PhiFunction::power(2.0));
        const auto res = solve_obstacle(pb);
        runs.push_back(higher_integrability_margin(pb.phi, res.u, pb.f, pb.psi, {0.1, 0.25, 0.5}));
    }
    for (std::size_t k = 0; k < 3; ++k) {
        ASSERT_TRUE(runs[1][k].finite());
        EXPECT_NEAR(refinement_ratio(runs[0][k].ratio, runs[1][k].ratio), 1.0, 0.2);
    }
}

TEST(Hardy, TentAndZero) {
    const auto mesh = unit_interval(32);
    const auto phi = PhiFunction::power(2.0);
    const auto tent = hardy_check(phi, field(mesh, "min(x, 1 - x)"));
    EXPECT_NEAR(tent.lhs, 1.0, 1e-7);
    EXPECT_NEAR(tent.rhs, 1.0, 1e-7);
    EXPECT_NEAR(tent.ratio, 1.0, 1e-7);
    EXPECT_EQ(hardy_check(phi, DiscreteField::constant(mesh, 0.0)).ratio, 0.0);
    EXPECT_THROW(hardy_check(phi, field(mesh, "1 + x")), PreconditionError);
}

TEST(Hardy, SineOracleAndFamily) {
    const auto phi = PhiFunction::power(3.0);
    // For t^3 the Luxemburg norm is the L^3 norm.
    const double pi = std::numbers::pi;
    const double num = std::cbrt(simpson([&](double x) {
        const double d = std::min(x, 1.0 - x);
        return d > 0.0 ? std::pow(std::sin(pi * x) / d, 3) : std::pow(pi, 3);
    }, 0.0, 1.0));
    const double den = std::cbrt(simpson([&](double x) { return std::pow(pi * std::abs(std::cos(pi * x)), 3); }, 0.0, 1.0));
    std::vector<double> ratios;
    for (int n : {32, 64}) {
        const auto rep = hardy_check(phi, field(unit_interval(n), "sin(pi*x)"));
        EXPECT_NEAR(rep.ratio, num / den, 0.05 * num / den);
        ratios.push_back(rep.ratio);
    }
    EXPECT_NEAR(refinement_ratio(ratios[0], ratios[1]), 1.0, 0.05);

    const auto sq = build_mesh(DomainSpec::unit_square(), 16);
    const auto ls = build_mesh(DomainSpec::l_shape(), 16);
    for (const auto& u : {field(sq, "x*(1 - x)*y*(1 - y)"), field(sq, "sin(pi*x)*sin(pi*y)"),
                          field(ls, "max(0, 0.04 - (x - 0.25)^2 - (y - 0.25)^2)")}) {
        const auto rep = hardy_check(PhiFunction::power(2.0), u);
        EXPECT_TRUE(rep.finite());
        EXPECT_LT(rep.ratio, 10.0);
    }
}
