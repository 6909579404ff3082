#pragma once

#include <cmath>

namespace orlicz {

/// Coordinate or vector in at most two dimensions. One-dimensional
/// problems keep y == 0.
struct Point {
    double x = 0.0;
    double y = 0.0;

    constexpr Point() = default;
    constexpr Point(double x_, double y_ = 0.0) : x(x_), y(y_) {}

    constexpr Point& operator+=(const Point& o) { x += o.x; y += o.y; return *this; }
    constexpr Point& operator-=(const Point& o) { x -= o.x; y -= o.y; return *this; }
    constexpr Point& operator*=(double s) { x *= s; y *= s; return *this; }

    friend constexpr Point operator+(Point a, const Point& b) { return a += b; }
    friend constexpr Point operator-(Point a, const Point& b) { return a -= b; }
    friend constexpr Point operator*(Point a, double s) { return a *= s; }
    friend constexpr Point operator*(double s, Point a) { return a *= s; }
    friend constexpr Point operator-(const Point& a) { return {-a.x, -a.y}; }
    friend constexpr bool operator==(const Point&, const Point&) = default;
};

constexpr double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Point& a) { return std::hypot(a.x, a.y); }
inline double distance(const Point& a, const Point& b) { return norm(a - b); }

/// Axis-aligned box [lo.x, hi.x] x [lo.y, hi.y]; in 1D only the x range matters.
struct Box {
    Point lo;
    Point hi;

    bool contains(const Point& p, int dimension) const {
        if (p.x < lo.x || p.x > hi.x) return false;
        return dimension == 1 || (p.y >= lo.y && p.y <= hi.y);
    }
};

}  // namespace orlicz
