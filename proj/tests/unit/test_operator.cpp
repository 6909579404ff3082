#include <gtest/gtest.h>

#include <cmath>

#include "orlicz/error.hpp"
#include "orlicz/operator.hpp"

using namespace orlicz;

namespace {

SamplingPlan plan_2d(int n = 9) { return SamplingPlan::on_box(Box{{0.0, 0.0}, {1.0, 1.0}}, 2, n, 1e-2, 1e1, 16); }

Perturbation law(PerturbationLaw l, const char* m = "1") { return Perturbation{l, ScalarField::from_expression(m)}; }

}  // namespace

TEST(CanonicalOperator, ClosedForms) {
    const auto a = canonical_operator(PhiFunction::power(2.0));
    const Point v = a.eval({0.2, 0.3}, {3.0, 4.0});
    EXPECT_NEAR(v.x, 6.0, 1e-14);
    EXPECT_NEAR(v.y, 8.0, 1e-14);

    const auto dp = canonical_operator(PhiFunction::double_phase(2.0, 4.0, ScalarField::constant(1.0)));
    const Point w = dp.eval({0.5, 0.5}, {1.0, 0.0});
    EXPECT_NEAR(w.x, 6.0, 1e-14);
    EXPECT_EQ(w.y, 0.0);
}

TEST(CanonicalOperator, ZeroLaw) {
    const auto a = canonical_operator(PhiFunction::orlicz_log(1.5));
    const Point z = a.eval({0.1, 0.1}, {0.0, 0.0});
    EXPECT_EQ(z.x, 0.0);
    EXPECT_EQ(z.y, 0.0);
}

TEST(CertifyStructure, Homogeneous) {
    for (double p : {2.0, 3.0}) {
        const auto phi = PhiFunction::power(p);
        const auto cert = certify_structure(canonical_operator(phi), phi, plan_2d());
        EXPECT_TRUE(cert.pass);
        EXPECT_NEAR(cert.c1, p, 1e-12);
        EXPECT_NEAR(cert.c2, p, 1e-12);
        if (p == 2.0) EXPECT_NEAR(cert.margin, 2.0, 1e-12);
        EXPECT_EQ(cert.samples, 9u * 16u * 16u);
    }
}

TEST(CertifyStructure, MultiplierScalesBothConstants) {
    const auto phi = PhiFunction::power(2.0);
    const auto op = perturbed_operator(canonical_operator(phi), 2, law(PerturbationLaw::multiplier));
    const auto cert = certify_structure(op, phi, plan_2d());
    // A_2 = 1.25 * 2 xi, measured against phi = t^2.
    EXPECT_NEAR(cert.c1, 2.5, 1e-12);
    EXPECT_NEAR(cert.c2, 2.5, 1e-12);
}

TEST(CertifyStructure, MarginPositiveForConvexFamilies) {
    for (const auto& phi : {PhiFunction::double_phase(2.0, 3.0, ScalarField::from_expression("x")),
                            PhiFunction::variable_exponent(ScalarField::from_expression("2 + 0.5*y"), 2.0, 2.5),
                            PhiFunction::orlicz_log(2.0), PhiFunction::power(1.5)}) {
        const auto cert = certify_structure(canonical_operator(phi), phi, plan_2d(4));
        EXPECT_TRUE(cert.pass) << phi.describe();
        EXPECT_GT(cert.margin, 0.0);
    }
}

TEST(CertifyStructure, LimitConstantsAreLimitsOfSequence) {
    const auto phi = PhiFunction::double_phase(2.0, 3.0, ScalarField::from_expression("x"));
    const auto base = canonical_operator(phi);
    const auto plan = plan_2d(4);
    const auto limit = certify_structure(base, phi, plan);
    const auto far = certify_structure(perturbed_operator(base, 12, law(PerturbationLaw::coefficient)),
                                       phi.with_coefficient_shift(perturbation_epsilon(12)), plan);
    EXPECT_NEAR(far.c1, limit.c1, 1e-3);
    EXPECT_NEAR(far.c2, limit.c2, 1e-3);
}

TEST(PerturbedOperator, Laws) {
    const auto base = canonical_operator(PhiFunction::power(2.0));
    const auto e1 = perturbed_operator(base, 1, law(PerturbationLaw::exponent));
    EXPECT_NEAR(e1.phi().eval({}, 2.0), std::pow(2.0, 2.5), 1e-12);
    EXPECT_DOUBLE_EQ(e1.epsilon(), 0.5);
    EXPECT_THROW(parse_perturbation_law("rotation"), ConfigurationError);
    EXPECT_THROW(perturbed_operator(e1, 2, law(PerturbationLaw::exponent)), PreconditionError);
    const auto bad = perturbed_operator(base, 1, law(PerturbationLaw::multiplier, "2"));
    EXPECT_THROW(bad.eval({0.5}, {1.0}), ConfigurationError);
}

TEST(PerturbedOperator, ExponentLawIsUniformInX) {
    const auto base = canonical_operator(
        PhiFunction::variable_exponent(ScalarField::from_expression("2 + 0.3*x"), 2.0, 2.3));
    const auto op = perturbed_operator(base, 3, law(PerturbationLaw::exponent));
    for (double x : {0.0, 0.4, 1.0}) {
        // phi_i(x, t) / phi(x, t) = t^{eps}, so at t = e the ratio is e^{1/8}.
        const double ratio = op.phi().eval({x}, std::exp(1.0)) / base.phi().eval({x}, std::exp(1.0));
        EXPECT_NEAR(std::log(ratio), 0.125, 1e-12);
    }
}

TEST(ConvergenceGap, ClosedFormsAndScan) {
    const auto phi = PhiFunction::power(2.0);
    const auto base = canonical_operator(phi);
    const Box compact{{0.25, 0.25}, {0.75, 0.75}};
    const auto plan = plan_2d(16);
    EXPECT_EQ(convergence_gap(base, base, compact, 1.0, plan), 0.0);

    const auto m3 = perturbed_operator(base, 3, law(PerturbationLaw::multiplier));
    EXPECT_NEAR(convergence_gap(m3, base, compact, 1.0, plan), 0.25, 1e-14);

    const auto e5 = perturbed_operator(base, 5, law(PerturbationLaw::exponent));
    double scan = 0.0;
    const double eps = 1.0 / 32.0;
    for (int k = 1; k <= 100000; ++k) {
        const double t = 10.0 * k / 100000.0;
        scan = std::max(scan, std::abs((2.0 + eps) * std::pow(t, 1.0 + eps) - 2.0 * t));
    }
    EXPECT_NEAR(convergence_gap(e5, base, compact, 10.0, plan), scan, 1e-9 * scan);
}

TEST(ConvergenceGap, MonotoneInIndex) {
    const auto phi = PhiFunction::double_phase(2.0, 3.0, ScalarField::from_expression("x*y"));
    const auto base = canonical_operator(phi);
    const Box compact{{0.2, 0.2}, {0.8, 0.8}};
    const auto plan = plan_2d(16);
    for (auto l : {PerturbationLaw::coefficient, PerturbationLaw::multiplier}) {
        double prev = 1e300;
        for (int i = 1; i <= 8; ++i) {
            const double gap = convergence_gap(perturbed_operator(base, i, law(l, "sin(3*x)")), base, compact, 5.0, plan);
            EXPECT_LT(gap, prev) << to_string(l) << " i=" << i;
            prev = gap;
        }
    }
    const auto pw = canonical_operator(PhiFunction::power(2.0));
    double prev = 1e300;
    for (int i = 1; i <= 8; ++i) {
        const double gap = convergence_gap(perturbed_operator(pw, i, law(PerturbationLaw::exponent)), pw, compact, 5.0, plan);
        EXPECT_LT(gap, prev);
        prev = gap;
    }
}

TEST(UnitDirections, SeededAndNormalised) {
    const auto a = unit_directions(2, 16, 5);
    const auto b = unit_directions(2, 16, 5);
    ASSERT_EQ(a.size(), 16u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i], b[i]);
        EXPECT_NEAR(norm(a[i]), 1.0, 1e-15);
    }
}
