#pragma once
/**
 * @file angles.hpp
 * @brief Angle wrapping and conversion helpers.
 *
 * Headings, bearings and aspect angles are stored wrapped to (-pi, pi];
 * this header is the only place wrapping logic lives.
 */

#include <cmath>
#include <numbers>

namespace dmc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

/// Wrap an angle to [0, 2*pi).
inline double wrap_two_pi(double a) {
  double w = a - kTwoPi * std::floor(a / kTwoPi);
  if (w >= kTwoPi || w < 0.0) w = 0.0;
  return w;
}

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Absolute angular distance between two angles on the circle, in [0, pi].
inline double angular_distance(double a, double b) {
  return std::abs(wrap_angle(a - b));
}

/// sign(x) with the zero case mapped to +1 (counterclockwise tie-break).
inline double sign_ccw(double x) { return x >= 0.0 ? 1.0 : -1.0; }

}  // namespace dmc
