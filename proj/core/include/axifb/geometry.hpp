#pragma once

#include <cmath>

namespace axifb {

struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
};

struct Vec2 {
    double a = 0.0;
    double b = 0.0;
    double dot(Vec2 o) const { return a * o.a + b * o.b; }
    double norm2() const { return a * a + b * b; }
};

inline Point operator+(Point p, Vec2 v) { return {p.x1 + v.a, p.x2 + v.b}; }
inline Vec2 operator-(Point p, Point q) { return {p.x1 - q.x1, p.x2 - q.x2}; }
inline double distance(Point p, Point q) { return std::hypot(p.x1 - q.x1, p.x2 - q.x2); }

}  // namespace axifb
