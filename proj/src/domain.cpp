#include "orlicz/domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "orlicz/error.hpp"

namespace orlicz {

namespace {

struct Segment {
    Point a;
    Point b;
};

double segment_distance(const Point& p, const Segment& s) {
    const Point d = s.b - s.a;
    const double len2 = dot(d, d);
    const double t = len2 > 0.0 ? std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0) : 0.0;
    return distance(p, s.a + d * t);
}

// Boundary of the L-shape, counter-clockwise from the lower-left corner.
std::array<Segment, 6> l_edges(const Box& b, const Point& m) {
    return {{{{b.lo.x, b.lo.y}, {b.hi.x, b.lo.y}},
             {{b.hi.x, b.lo.y}, {b.hi.x, m.y}},
             {{b.hi.x, m.y}, {m.x, m.y}},
             {{m.x, m.y}, {m.x, b.hi.y}},
             {{m.x, b.hi.y}, {b.lo.x, b.hi.y}},
             {{b.lo.x, b.hi.y}, {b.lo.x, b.lo.y}}}};
}

std::array<Segment, 4> rect_edges(const Box& b) {
    return {{{{b.lo.x, b.lo.y}, {b.hi.x, b.lo.y}},
             {{b.hi.x, b.lo.y}, {b.hi.x, b.hi.y}},
             {{b.hi.x, b.hi.y}, {b.lo.x, b.hi.y}},
             {{b.lo.x, b.hi.y}, {b.lo.x, b.lo.y}}}};
}

}  // namespace

const char* to_string(Geometry g) noexcept {
    switch (g) {
        case Geometry::interval: return "interval";
        case Geometry::rectangle: return "rectangle";
        case Geometry::l_shape: return "l_shape";
    }
    return "unknown";
}

DomainSpec DomainSpec::interval(double a, double b) {
    if (!(b > a)) throw ConfigurationError("interval needs a < b");
    // Half of every ball centred at an endpoint lies outside.
    return DomainSpec(Geometry::interval, Box{{a, 0.0}, {b, 0.0}}, 0.5, b - a);
}

DomainSpec DomainSpec::rectangle(const Box& box) {
    if (!(box.hi.x > box.lo.x) || !(box.hi.y > box.lo.y)) throw ConfigurationError("rectangle needs positive extent");
    // Convex: the exterior half-plane at any boundary point is outside.
    return DomainSpec(Geometry::rectangle, box, 0.5, std::max(box.hi.x - box.lo.x, box.hi.y - box.lo.y));
}

DomainSpec DomainSpec::l_shape(const Box& box) {
    if (!(box.hi.x > box.lo.x) || !(box.hi.y > box.lo.y)) throw ConfigurationError("L-shape needs positive extent");
    // The re-entrant corner leaves only the removed quadrant outside.
    const double r0 = 0.5 * std::min(box.hi.x - box.lo.x, box.hi.y - box.lo.y);
    return DomainSpec(Geometry::l_shape, box, 0.25, r0);
}

Point DomainSpec::reentrant_corner() const noexcept {
    return Point{0.5 * (box_.lo.x + box_.hi.x), 0.5 * (box_.lo.y + box_.hi.y)};
}

double DomainSpec::measure() const noexcept {
    const double w = box_.hi.x - box_.lo.x;
    const double h = box_.hi.y - box_.lo.y;
    switch (geometry_) {
        case Geometry::interval: return w;
        case Geometry::rectangle: return w * h;
        case Geometry::l_shape: return 0.75 * w * h;
    }
    return 0.0;
}

double DomainSpec::diameter() const noexcept {
    if (geometry_ == Geometry::interval) return box_.hi.x - box_.lo.x;
    return distance(box_.lo, box_.hi);
}

bool DomainSpec::contains(const Point& p) const noexcept {
    if (!box_.contains(p, dimension())) return false;
    if (geometry_ != Geometry::l_shape) return true;
    const Point m = reentrant_corner();
    return !(p.x > m.x && p.y > m.y);
}

bool DomainSpec::on_boundary(const Point& p, double tol) const noexcept {
    if (!contains(p)) return false;
    return distance_to_boundary(p) <= tol;
}

double DomainSpec::distance_to_boundary(const Point& p) const noexcept {
    if (!contains(p)) return 0.0;
    switch (geometry_) {
        case Geometry::interval: return std::min(p.x - box_.lo.x, box_.hi.x - p.x);
        case Geometry::rectangle: {
            double d = std::numeric_limits<double>::infinity();
            for (const auto& e : rect_edges(box_)) d = std::min(d, segment_distance(p, e));
            return d;
        }
        case Geometry::l_shape: {
            double d = std::numeric_limits<double>::infinity();
            for (const auto& e : l_edges(box_, reentrant_corner())) d = std::min(d, segment_distance(p, e));
            return d;
        }
    }
    return 0.0;
}

bool DomainSpec::contains_box(const Box& b, double margin) const noexcept {
    const Box grown{{b.lo.x - margin, b.lo.y - margin}, {b.hi.x + margin, b.hi.y + margin}};
    if (geometry_ == Geometry::interval) return grown.lo.x > box_.lo.x && grown.hi.x < box_.hi.x;
    if (!(grown.lo.x > box_.lo.x && grown.hi.x < box_.hi.x && grown.lo.y > box_.lo.y && grown.hi.y < box_.hi.y))
        return false;
    if (geometry_ == Geometry::rectangle) return true;
    // A box misses the removed quadrant iff it lies left of or below the corner.
    const Point m = reentrant_corner();
    return grown.hi.x < m.x || grown.hi.y < m.y;
}

std::string DomainSpec::describe() const {
    std::ostringstream os;
    os << to_string(geometry_) << " [" << box_.lo.x << ", " << box_.hi.x << "]";
    if (dimension() == 2) os << " x [" << box_.lo.y << ", " << box_.hi.y << "]";
    return os.str();
}

MeasureDensityCheck measure_density_spot_check(const DomainSpec& domain, double h_mesh, int boundary_samples,
                                               std::uint64_t seed) {
    const Box& b = domain.bounding_box();
    std::vector<Segment> edges;
    if (domain.geometry() == Geometry::rectangle) {
        const auto e = rect_edges(b);
        edges.assign(e.begin(), e.end());
    } else if (domain.geometry() == Geometry::l_shape) {
        const auto e = l_edges(b, domain.reentrant_corner());
        edges.assign(e.begin(), e.end());
    }

    std::vector<Point> centers;
    if (domain.dimension() == 1) {
        centers = {Point{b.lo.x}, Point{b.hi.x}};
    } else {
        double perimeter = 0.0;
        for (const auto& e : edges) perimeter += distance(e.a, e.b);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, perimeter);
        for (const auto& e : edges) centers.push_back(e.a);
        for (int k = 0; k < boundary_samples; ++k) {
            double s = u(rng);
            for (const auto& e : edges) {
                const double len = distance(e.a, e.b);
                if (s <= len) {
                    centers.push_back(e.a + (e.b - e.a) * (s / len));
                    break;
                }
                s -= len;
            }
        }
    }

    std::vector<double> radii;
    const double r_min = std::min(domain.density_r0(), 4.0 * h_mesh);
    for (double r = domain.density_r0(); r >= r_min * (1.0 - 1e-12); r *= 0.5) radii.push_back(r);
    if (radii.empty() || radii.back() > r_min) radii.push_back(r_min);

    // Midpoint lattice on the bounding square of each ball; never sits on the
    // axes through the centre, so corner quadrants are counted exactly.
    constexpr int kLattice = 24;
    MeasureDensityCheck out;
    for (const auto& z : centers)
        for (double r : radii) {
            double fraction = 0.0;
            if (domain.dimension() == 1) {
                const double outside = std::max(0.0, b.lo.x - (z.x - r)) + std::max(0.0, (z.x + r) - b.hi.x);
                fraction = std::min(2.0 * r, outside) / (2.0 * r);
            } else {
                int inside_ball = 0;
                int outside_domain = 0;
                for (int j = 0; j < kLattice; ++j)
                    for (int i = 0; i < kLattice; ++i) {
                        const Point off{(2.0 * (i + 0.5) / kLattice - 1.0) * r, (2.0 * (j + 0.5) / kLattice - 1.0) * r};
                        if (norm(off) > r) continue;
                        ++inside_ball;
                        const Point q = z + off;
                        const bool in = domain.contains(q) && !domain.on_boundary(q, 0.0);
                        if (!in) ++outside_domain;
                    }
                fraction = static_cast<double>(outside_domain) / inside_ball;
            }
            ++out.samples;
            if (fraction < out.min_fraction) {
                out.min_fraction = fraction;
                out.worst_center = z;
                out.worst_radius = r;
            }
        }
    out.pass = out.min_fraction >= 0.9 * domain.density_c();
    return out;
}

}  // namespace orlicz
