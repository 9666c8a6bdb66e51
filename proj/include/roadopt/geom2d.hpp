#pragma once

#include <cmath>

namespace roadopt {

/// Planar point / vector, meters.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// z-component of the 3-D cross product; sign gives turn orientation.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

inline Vec2 unit(Vec2 v) {
  const double n = norm(v);
  return {v.x / n, v.y / n};
}

/// Rotate 90 degrees counter-clockwise.
constexpr Vec2 perp_ccw(Vec2 v) { return {-v.y, v.x}; }

inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

/// Distance from p to the infinite line through a and b.
inline double point_line_distance(Vec2 p, Vec2 a, Vec2 b) {
  return std::abs(cross(b - a, p - a)) / norm(b - a);
}

}  // namespace roadopt
