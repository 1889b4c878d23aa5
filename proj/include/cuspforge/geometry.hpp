#pragma once

#include <cmath>
#include <optional>

#include "cuspforge/common.hpp"

namespace cuspforge {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    Vec2 perp() const { return {-y, x}; }  // rotate +90 degrees
};

inline double dist(Vec2 a, Vec2 b) { return (a - b).norm(); }

struct Circle {
    Vec2 center;
    double radius = 0.0;
};

struct Line {
    Vec2 normal;    // unit
    double offset;  // points p with normal.dot(p) == offset
};

// A circle or a line on the Riemann sphere; lines arise as Moebius images
// of circles through the inversion center.
struct GeneralizedCircle {
    enum class Kind { circle, line };
    Kind kind = Kind::circle;
    Circle circle;
    Line line;

    static GeneralizedCircle make_circle(Vec2 c, double r) {
        GeneralizedCircle g;
        g.kind = Kind::circle;
        g.circle = {c, r};
        return g;
    }
    static GeneralizedCircle make_line(Vec2 normal, double offset) {
        GeneralizedCircle g;
        g.kind = Kind::line;
        double n = normal.norm();
        g.line = {{normal.x / n, normal.y / n}, offset / n};
        return g;
    }
};

// Circumcircle of three points; nullopt when they are collinear within
// a relative tolerance (signals a degenerate packing face).
inline std::optional<Circle> circumcircle(Vec2 a, Vec2 b, Vec2 c, double rel_tol = 1e-12) {
    Vec2 ab = b - a, ac = c - a;
    double d = 2.0 * ab.cross(ac);
    double scale = ab.norm() * ac.norm();
    if (std::abs(d) <= rel_tol * 2.0 * scale) return std::nullopt;
    double ab2 = ab.dot(ab), ac2 = ac.dot(ac);
    double ux = (ac.y * ab2 - ab.y * ac2) / d;
    double uy = (ab.x * ac2 - ac.x * ab2) / d;
    Vec2 center{a.x + ux, a.y + uy};
    return Circle{center, dist(center, a)};
}

// Image of circle `c` under z -> 1/(z - t), where `c` passes through t.
// The image is the line { p : normal.dot(p) == offset }.
inline Line invert_circle_through_point(const Circle& c, Vec2 t) {
    // With w = z - t the circle is |w - q| = |q|, q = center - t, and the
    // image of w -> 1/w is Re(q zeta) = 1/2 (complex product), i.e. the line
    // with normal (q.x, -q.y) and offset 1/2.
    Vec2 q = c.center - t;
    double n = q.norm();
    return Line{{q.x / n, -q.y / n}, 0.5 / n};
}

// Image of a point p != t under z -> 1/(z - t).
inline Vec2 invert_point(Vec2 p, Vec2 t) {
    Vec2 w = p - t;
    double d2 = w.dot(w);
    return {w.x / d2, -w.y / d2};
}

// Image of a circle not passing through t under z -> 1/(z - t).
inline Circle invert_circle_off_point(const Circle& c, Vec2 t) {
    Vec2 q = c.center - t;
    double k = q.dot(q) - c.radius * c.radius;
    return Circle{{q.x / k, -q.y / k}, c.radius / std::abs(k)};
}

}  // namespace cuspforge
