#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "orlicz/certification.hpp"
#include "orlicz/error.hpp"

using namespace orlicz;

namespace {

const Box kUnit{{0.0, 0.0}, {1.0, 0.0}};

SamplingPlan plan_1d(int n = 16) { return SamplingPlan::on_box(kUnit, 1, n); }

PhiFunction double_phase(const char* a) { return PhiFunction::double_phase(2.0, 4.0, ScalarField::from_expression(a)); }

double bisect(double lo, double hi, auto&& f) {
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(CertifyA0, VariableExponentPassesAtOne) {
    const auto phi = PhiFunction::variable_exponent(ScalarField::from_expression("2 + x"), 2.0, 3.0);
    const auto cert = certify_a0(phi, plan_1d());
    EXPECT_TRUE(cert.pass);
    EXPECT_NEAR(cert.measured, 1.0, 1e-9);
}

TEST(CertifyA0, DoublePhaseMatchesRootFind) {
    const double oracle = bisect(0.0, 1.0, [](double b) { return b * b + b * b * b * b - 1.0; });
    EXPECT_NEAR(oracle, 0.78615137775742328, 1e-15);
    const auto cert = certify_a0(double_phase("1"), plan_1d());
    EXPECT_TRUE(cert.pass);
    EXPECT_NEAR(cert.measured, oracle, 1e-8);
}

TEST(CertifyA0, ScaledPowerThreshold) {
    const auto phi = PhiFunction::power(2.0, 100.0);
    const auto plan = plan_1d(4);
    EXPECT_TRUE(a0_holds(phi, plan, 0.1));
    EXPECT_FALSE(a0_holds(phi, plan, 0.2));
    EXPECT_NEAR(certify_a0(phi, plan).measured, 0.1, 1e-9);
}

TEST(CertifyA1, SpatiallyConstantRatioIsOne) {
    const auto cert = certify_a1(PhiFunction::power(2.0), plan_1d(8), {0.05, 0.2});
    EXPECT_TRUE(cert.pass);
    EXPECT_DOUBLE_EQ(cert.measured, 1.0);
}

TEST(CertifyA1, StepExponentFailsOnSmallBalls) {
    SamplingPlan plan = plan_1d(4);
    plan.points.push_back({0.5});
    const std::vector<double> radii{1e-2, 1e-4, 1e-8};
    const auto step = PhiFunction::variable_exponent(ScalarField::from_expression("2 + step(x - 0.5)"), 2.0, 3.0);
    const auto cert = certify_a1(step, plan, radii);
    EXPECT_FALSE(cert.pass);
    // Two-point evaluation across the jump at t = 1/|B|: t^{1/3} / t^{1/2}.
    const double t = 1.0 / (2.0 * 1e-8);
    EXPECT_NEAR(cert.measured, std::pow(t, 1.0 / 3.0 - 0.5), 1e-6);

    const auto smooth = PhiFunction::variable_exponent(ScalarField::from_expression("2 + x"), 2.0, 3.0);
    EXPECT_TRUE(certify_a1(smooth, plan, radii).pass);
}

TEST(CertifyA1, DoublePhaseAgainstDensePairs) {
    const auto phi = double_phase("abs(x)");
    SamplingPlan plan = plan_1d(4);
    const std::vector<double> radii{0.05, 0.1};
    const auto cert = certify_a1(phi, plan, radii);

    double oracle = 1.0;
    for (double r : radii) {
        const double t_hi = 1.0 / (2.0 * r);
        for (const auto& c : plan.points)
            for (int k = 0; k < 16; ++k) {
                const double t = std::pow(t_hi, k / 15.0);
                double lo = 1e300;
                double hi = 0.0;
                for (int j = 0; j <= 400; ++j) {
                    const double y = c.x - r + 2.0 * r * j / 400.0;
                    if (y < 0.0 || y > 1.0) continue;
                    const double v = phi.inverse({y}, t);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                oracle = std::min(oracle, lo / hi);
            }
    }
    EXPECT_GE(cert.measured, oracle - 1e-9);
    EXPECT_NEAR(cert.measured, oracle, 5e-3);
    EXPECT_TRUE(cert.pass);
}

TEST(CertifyA1, RejectsRadiusBelowResolution) {
    SamplingPlan plan = plan_1d(4);
    plan.min_radius = 0.01;
    EXPECT_THROW(certify_a1(PhiFunction::power(2.0), plan, {0.001}), ConfigurationError);
}

TEST(CertifyAincAdec, ExactHomogeneity) {
    auto cert = certify_ainc_adec(PhiFunction::power(3.0), 3.0, 3.0, plan_1d());
    EXPECT_TRUE(cert.pass);
    EXPECT_NEAR(cert.parameters.at("L_p"), 1.0, 1e-12);
    EXPECT_NEAR(cert.parameters.at("L_q"), 1.0, 1e-12);

    cert = certify_ainc_adec(double_phase("1"), 2.0, 4.0, plan_1d());
    EXPECT_TRUE(cert.pass);
    EXPECT_NEAR(cert.parameters.at("L_p"), 1.0, 1e-12);
    EXPECT_NEAR(cert.parameters.at("L_q"), 1.0, 1e-12);
}

TEST(CertifyAincAdec, WrongExponentRejected) {
    const auto cert = certify_ainc_adec(PhiFunction::power(2.0), 3.0, 3.0, plan_1d());
    EXPECT_FALSE(cert.pass);
    EXPECT_GT(cert.parameters.at("L_p"), 1e3);
    ASSERT_TRUE(cert.worst.has_value());
}

TEST(CertifyAincAdec, ConjugateRatesAreDual) {
    const auto plan = plan_1d(4);
    for (double p : {1.5, 2.0, 3.0}) {
        const double pc = p / (p - 1.0);
        const auto conj = PhiFunction::conjugate(PhiFunction::power(p));
        const auto cert = certify_ainc_adec(conj, pc, pc, plan);
        EXPECT_TRUE(cert.pass) << "p=" << p;
        EXPECT_LE(cert.measured, 1.05);
    }
    // Double phase (2,4) with a varying weight: phi* is (aInc)_{4/3}, (aDec)_2.
    const auto conj = PhiFunction::conjugate(double_phase("x"));
    EXPECT_TRUE(certify_ainc_adec(conj, 4.0 / 3.0, 2.0, plan).pass);
}

TEST(CheckYoung, DoublePhaseFullPlan) {
    SamplingPlan plan = plan_1d(16);
    const auto report = check_young(double_phase("x"), plan);
    EXPECT_EQ(report.violations, 0u) << report.worst_excess;
    EXPECT_EQ(report.convex_violations, 0u) << report.worst_convex_ratio;
    EXPECT_EQ(report.checked, 16u * 32u * 32u);
}

TEST(Domination, ExponentPerturbation) {
    const auto plan = plan_1d(4);
    const auto r = domination_constant(PhiFunction::power(2.25), PhiFunction::power(2.0), 0.2, 1.0, plan);
    EXPECT_NEAR(r.l_forward, 1.0, 1e-12);
    const auto self = domination_constant(PhiFunction::power(2.0), PhiFunction::power(2.0), 0.2, 1.0, plan);
    EXPECT_NEAR(self.l_forward, 1.0, 1e-12);
    EXPECT_NEAR(self.l_backward, 1.0, 1e-12);
}

TEST(Domination, CoefficientPerturbationMatchesScan) {
    const auto plan = plan_1d(8);
    const auto phi = double_phase("x");
    const auto phi_i = phi.with_coefficient_shift(0.25);
    const auto r = domination_constant(phi_i, phi, 0.1, 1.0, plan);
    double scan = 0.0;
    for (const auto& x : plan.points)
        for (double t : plan.t_grid())
            if (t >= 1.0) scan = std::max(scan, phi_i.eval(x, t) / std::pow(phi.eval(x, t), 1.1));
    EXPECT_DOUBLE_EQ(r.l_forward, scan);
    EXPECT_TRUE(std::isfinite(r.l_backward));
}

TEST(Domination, DegenerateComparison) {
    SamplingPlan plan = plan_1d(2);
    const auto zero = PhiFunction::weighted(PhiFunction::power(2.0), ScalarField::from_expression("max(x - 0.5, 0)"));
    EXPECT_THROW(domination_constant(PhiFunction::power(2.0), zero, 0.1, 1.0, plan), DegenerateComparison);
}

TEST(SamplingPlanTest, GridIsStrictlyIncreasing) {
    const auto g = plan_1d().t_grid();
    ASSERT_EQ(g.size(), 32u);
    EXPECT_DOUBLE_EQ(g.front(), 1e-2);
    EXPECT_DOUBLE_EQ(g.back(), 1e2);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
    SamplingPlan bad = plan_1d();
    bad.t_min = 0.0;
    EXPECT_THROW(bad.validate(), ConfigurationError);
}
