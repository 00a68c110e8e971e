#pragma once

#include <cmath>

namespace perifrac {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
};

inline Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

struct Segment {
    Vec2 a;
    Vec2 b;
};

// Transversal crossing test between the open segment (p,q) and the closed
// segment s. The endpoints p and q must lie strictly on opposite sides of
// the line through s, so collinear overlap and endpoint grazing do not
// count as crossings.
inline bool properly_crosses(const Vec2& p, const Vec2& q, const Segment& s) {
    const Vec2 d = s.b - s.a;
    const double dp = cross(d, p - s.a);
    const double dq = cross(d, q - s.a);
    if (!(dp * dq < 0.0)) return false;
    // Signed distances are linear along (p,q), so the crossing point is at
    // parameter u = dp / (dp - dq). Project it onto s.
    const double u = dp / (dp - dq);
    const Vec2 xpt = p + u * (q - p);
    const double t = dot(xpt - s.a, d) / dot(d, d);
    return t >= 0.0 && t <= 1.0;
}

}  // namespace perifrac
