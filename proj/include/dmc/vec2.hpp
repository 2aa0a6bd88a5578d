#pragma once
/**
 * @file vec2.hpp
 * @brief Minimal 2D vector and bearing helpers.
 */

#include <cmath>
#include <stdexcept>

#include "dmc/angles.hpp"

namespace dmc {

struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  friend constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

  constexpr double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  constexpr double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

/// Unit vector pointing along a heading angle.
inline Vec2 heading_vector(double heading) {
  return {std::cos(heading), std::sin(heading)};
}

inline double distance(const Vec2& a, const Vec2& b) { return (b - a).norm(); }

/// Four-quadrant bearing from one point to another, wrapped to (-pi, pi].
/// Throws std::invalid_argument for coincident points.
inline double bearing(const Vec2& from, const Vec2& to) {
  const Vec2 d = to - from;
  if (d.x == 0.0 && d.y == 0.0) {
    throw std::invalid_argument("bearing: coincident points");
  }
  return wrap_angle(std::atan2(d.y, d.x));
}

}  // namespace dmc
