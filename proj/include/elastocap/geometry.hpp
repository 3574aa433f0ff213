#pragma once

#include <cmath>

namespace elastocap {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double k) const { return {k * x, k * y}; }
    Vec2 operator/(double k) const { return {x / k, y / k}; }
    Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Vec2& operator-=(const Vec2& o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }

    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double k, const Vec2& v) { return {k * v.x, k * v.y}; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

inline Vec2 lerp(const Vec2& a, const Vec2& b, double t) {
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

// Left-hand unit normal (tangent rotated +90 degrees).
inline Vec2 left_normal(const Vec2& t) {
    const double n = t.norm();
    return {-t.y / n, t.x / n};
}

inline Vec2 normalized(const Vec2& v) {
    const double n = v.norm();
    return {v.x / n, v.y / n};
}

// Horizontal mirror across the vertical line x = axis.
inline Vec2 reflect_x(const Vec2& p, double axis) { return {2.0 * axis - p.x, p.y}; }

// Distance from point p to the segment [a, b].
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double den = ab.norm2();
    if (den == 0.0) return (p - a).norm();
    double t = dot(p - a, ab) / den;
    if (t < 0.0) t = 0.0;
    if (t > 1.0) t = 1.0;
    return (p - (a + t * ab)).norm();
}

}  // namespace elastocap
