#pragma once

#include <cstdint>
#include <string>

#include "orlicz/point.hpp"

namespace orlicz {

enum class Geometry { interval, rectangle, l_shape };
const char* to_string(Geometry g) noexcept;

/// Bounded domain with its measure-density constants (c, r0) attached.
///
/// The L-shape is `box` minus its upper-right quadrant
/// [mid.x, hi.x] x [mid.y, hi.y].
class DomainSpec {
public:
    static DomainSpec interval(double a, double b);
    static DomainSpec rectangle(const Box& box);
    static DomainSpec unit_square() { return rectangle(Box{{0.0, 0.0}, {1.0, 1.0}}); }
    static DomainSpec l_shape(const Box& box = Box{{0.0, 0.0}, {1.0, 1.0}});

    Geometry geometry() const noexcept { return geometry_; }
    int dimension() const noexcept { return geometry_ == Geometry::interval ? 1 : 2; }
    const Box& bounding_box() const noexcept { return box_; }
    Point reentrant_corner() const noexcept;

    double measure() const noexcept;
    double diameter() const noexcept;
    /// Closure membership.
    bool contains(const Point& p) const noexcept;
    bool on_boundary(const Point& p, double tol = 1e-12) const noexcept;
    /// Exact distance to the boundary (zero outside).
    double distance_to_boundary(const Point& p) const noexcept;
    /// True when `box` grown by `margin` on every side lies in the open domain.
    bool contains_box(const Box& box, double margin) const noexcept;

    /// Shipped measure-density constant c and radius r0.
    double density_c() const noexcept { return density_c_; }
    double density_r0() const noexcept { return density_r0_; }

    std::string describe() const;

private:
    DomainSpec(Geometry g, Box box, double c, double r0) : geometry_(g), box_(box), density_c_(c), density_r0_(r0) {}

    Geometry geometry_;
    Box box_;
    double density_c_;
    double density_r0_;
};

struct MeasureDensityCheck {
    double min_fraction = 1.0;  ///< min over samples of |B(z,r) \ Omega| / |B(z,r)|
    Point worst_center;
    double worst_radius = 0.0;
    std::size_t samples = 0;
    bool pass = false;
};

/// Spot check of the measure density condition: `boundary_samples` random
/// boundary points plus every corner, radii geometric from r0 down to
/// 4 h_mesh. Passes when every measured fraction is at least 0.9 c.
MeasureDensityCheck measure_density_spot_check(const DomainSpec& domain, double h_mesh,
                                               int boundary_samples = 10000, std::uint64_t seed = 7);

}  // namespace orlicz
