#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "orlicz/domain.hpp"
#include "orlicz/error.hpp"
#include "orlicz/mesh.hpp"

using namespace orlicz;

TEST(BuildMesh, IntervalPartition) {
    const auto mesh = build_mesh(DomainSpec::interval(0.0, 1.0), 4);
    EXPECT_EQ(mesh->node_count(), 5u);
    EXPECT_EQ(mesh->cell_count(), 4u);
    for (double m : mesh->cell_measures()) EXPECT_DOUBLE_EQ(m, 0.25);
    EXPECT_TRUE(mesh->is_boundary(0));
    EXPECT_TRUE(mesh->is_boundary(4));
    EXPECT_FALSE(mesh->is_boundary(2));
}

TEST(BuildMesh, UnitSquare) {
    const auto mesh = build_mesh(DomainSpec::unit_square(), 2);
    EXPECT_EQ(mesh->node_count(), 9u);
    EXPECT_EQ(mesh->cell_count(), 8u);
    EXPECT_NEAR(mesh->total_measure(), 1.0, 1e-15);
    EXPECT_EQ(std::count(mesh->boundary_mask().begin(), mesh->boundary_mask().end(), true), 8);
}

TEST(BuildMesh, LShapeMeasure) {
    for (int r : {2, 3, 8, 17, 64}) {
        const auto mesh = build_mesh(DomainSpec::l_shape(), r);
        EXPECT_NEAR(mesh->total_measure(), 0.75, 0.75 * 1e-12) << r;
        EXPECT_EQ(mesh->resolution(), r);
    }
    const auto mesh = build_mesh(DomainSpec::l_shape(), 4);
    // 25 grid nodes minus the 4 strictly inside the removed quadrant.
    EXPECT_EQ(mesh->node_count(), 21u);
    EXPECT_EQ(mesh->cell_count(), 24u);
}

TEST(BuildMesh, MeasuresPositiveAndBoundaryOnBoundary) {
    for (const auto& domain : {DomainSpec::interval(-1.0, 2.0), DomainSpec::unit_square(), DomainSpec::l_shape(),
                               DomainSpec::rectangle(Box{{0.0, 0.0}, {2.0, 1.0}})}) {
        const auto mesh = build_mesh(domain, 12);
        double total = 0.0;
        for (double m : mesh->cell_measures()) {
            EXPECT_GT(m, 0.0);
            total += m;
        }
        EXPECT_NEAR(total, domain.measure(), 1e-12 * domain.measure());
        for (std::size_t i = 0; i < mesh->node_count(); ++i) {
            const double d = domain.distance_to_boundary(mesh->nodes()[i]);
            if (mesh->is_boundary(i))
                EXPECT_LT(d, 1e-12);
            else
                EXPECT_GT(d, 1e-3);
        }
    }
}

TEST(BuildMesh, RejectsCoarseResolution) {
    EXPECT_THROW(build_mesh(DomainSpec::unit_square(), 1), ConfigurationError);
}

TEST(BuildMesh, Deterministic) {
    const auto a = build_mesh(DomainSpec::l_shape(), 10);
    const auto b = build_mesh(DomainSpec::l_shape(), 10);
    EXPECT_EQ(a->nodes(), b->nodes());
    EXPECT_EQ(a->cells(), b->cells());
}

TEST(Gradient, AffineExactness) {
    const auto line = build_mesh(DomainSpec::interval(0.0, 1.0), 7);
    for (const auto& g : gradient(DiscreteField::interpolate(line, ScalarField::from_expression("x"))))
        EXPECT_NEAR(g.x, 1.0, 1e-13);
    for (const auto& g : gradient(DiscreteField::constant(line, 3.0))) EXPECT_EQ(norm(g), 0.0);

    for (const auto& domain : {DomainSpec::unit_square(), DomainSpec::l_shape()}) {
        const auto mesh = build_mesh(domain, 6);
        const auto u = DiscreteField::interpolate(mesh, ScalarField::from_expression("x + 2*y"));
        for (const auto& g : u.gradient()) {
            EXPECT_NEAR(g.x, 1.0, 1e-12);
            EXPECT_NEAR(g.y, 2.0, 1e-12);
        }
    }
}

TEST(SubcellPoints, WeightsAndBarycentrics) {
    const auto mesh = build_mesh(DomainSpec::unit_square(), 3);
    const auto u = DiscreteField::interpolate(mesh, ScalarField::from_expression("3*x - y"));
    for (std::size_t c = 0; c < mesh->cell_count(); ++c) {
        const auto pts = subcell_points(*mesh, c, 4);
        EXPECT_EQ(pts.size(), 16u);
        double w = 0.0;
        for (const auto& s : pts) {
            w += s.weight;
            EXPECT_NEAR(u.value_at(c, s.barycentric), 3.0 * s.position.x - s.position.y, 1e-13);
            for (double l : s.barycentric) EXPECT_GT(l, 0.0);
        }
        EXPECT_NEAR(w, mesh->cell_measures()[c], 1e-15);
    }
    const auto line = build_mesh(DomainSpec::interval(0.0, 1.0), 4);
    const auto pts = subcell_points(*line, 1, 4);
    ASSERT_EQ(pts.size(), 4u);
    EXPECT_DOUBLE_EQ(pts[0].position.x, 0.25 + 0.25 / 8.0);
}

TEST(FieldIo, RoundTrip) {
    const auto mesh = build_mesh(DomainSpec::l_shape(), 6);
    const auto u = DiscreteField::interpolate(mesh, ScalarField::from_expression("sin(x) * exp(y) / 3"));
    const auto f = DiscreteField::constant(mesh, -0.1);
    std::stringstream io;
    write_fields(io, *mesh, {{"u", &u}, {"f", &f}});
    const auto bundle = read_fields(io);
    EXPECT_EQ(bundle.mesh->nodes(), mesh->nodes());
    EXPECT_EQ(bundle.mesh->cells(), mesh->cells());
    EXPECT_EQ(bundle.mesh->boundary_mask(), mesh->boundary_mask());
    EXPECT_EQ(bundle.fields.at("u").values(), u.values());
    EXPECT_EQ(bundle.fields.at("f").values(), f.values());
}

TEST(FieldIo, RejectsGarbage) {
    std::stringstream io("not a table\n");
    EXPECT_THROW(read_fields(io), ConfigurationError);
}

TEST(DiscreteFieldTest, Invariants) {
    const auto mesh = build_mesh(DomainSpec::interval(0.0, 1.0), 4);
    EXPECT_THROW(DiscreteField(mesh, {1.0, 2.0}), MeshMismatch);
    EXPECT_THROW(DiscreteField(mesh, {1.0, 2.0, NAN, 0.0, 0.0}), PreconditionError);
    const auto other = build_mesh(DomainSpec::interval(0.0, 1.0), 4);
    EXPECT_THROW(DiscreteField::constant(mesh, 1.0) - DiscreteField::constant(other, 1.0), MeshMismatch);
}

TEST(MeasureDensity, ShippedGeometriesPass) {
    struct Case {
        DomainSpec domain;
        double c;
    };
    for (const auto& [domain, c] : {Case{DomainSpec::interval(0.0, 1.0), 0.5}, Case{DomainSpec::unit_square(), 0.5},
                                    Case{DomainSpec::l_shape(), 0.25}}) {
        EXPECT_DOUBLE_EQ(domain.density_c(), c);
        const auto check = measure_density_spot_check(domain, 1.0 / 32.0, 10000, 11);
        EXPECT_TRUE(check.pass) << domain.describe() << " min " << check.min_fraction;
        EXPECT_GE(check.min_fraction, 0.9 * c);
    }
}

TEST(DomainDistance, LShapeReentrantCorner) {
    const auto l = DomainSpec::l_shape();
    EXPECT_NEAR(l.distance_to_boundary({0.4, 0.4}), std::sqrt(0.02), 1e-15);
    EXPECT_NEAR(l.distance_to_boundary({0.4, 0.2}), 0.2, 1e-15);
    EXPECT_NEAR(l.distance_to_boundary({0.25, 0.75}), 0.25, 1e-15);
    EXPECT_FALSE(l.contains({0.75, 0.75}));
    EXPECT_TRUE(l.contains_box(Box{{0.2, 0.2}, {0.4, 0.4}}, 0.05));
    EXPECT_FALSE(l.contains_box(Box{{0.2, 0.2}, {0.6, 0.6}}, 0.0));
}
