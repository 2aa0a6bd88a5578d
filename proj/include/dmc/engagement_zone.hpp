#pragma once
/**
 * @file engagement_zone.hpp
 * @brief Basic engagement zone geometry for a single threat.
 *
 * A threat is described by the agent/threat speed ratio (strictly inside
 * (0,1), the agent is slower), a reach distance, and a capture radius. The
 * zone boundary distance from the threat is a function of the aspect angle
 * between the agent's heading and its bearing to the threat; aspect 0 means
 * heading straight at the threat and maximizes the boundary distance.
 *
 * All functions here are pure and safe for concurrent use.
 */

#include <cmath>
#include <stdexcept>

#include "dmc/angles.hpp"
#include "dmc/vec2.hpp"

namespace dmc {

struct ThreatParams {
  double speed_ratio;     ///< agent speed / threat speed, in (0,1)
  double reach;           ///< maximum distance the threat can close
  double capture_radius;  ///< minimum safe separation from the threat
};

/// Validating factory. Throws std::invalid_argument naming the bad field.
inline ThreatParams make_threat_params(double speed_ratio, double reach,
                                       double capture_radius) {
  if (!(speed_ratio > 0.0 && speed_ratio < 1.0)) {
    throw std::invalid_argument("speed_ratio (mu) must be in (0,1)");
  }
  if (!(reach > 0.0)) {
    throw std::invalid_argument("reach (R) must be > 0");
  }
  if (!(capture_radius >= 0.0)) {
    throw std::invalid_argument("capture_radius (r) must be >= 0");
  }
  return {speed_ratio, reach, capture_radius};
}

/// Reach expressed as a closing budget: reach = threat_speed * reaction_time.
inline ThreatParams make_threat_params_from_budget(double speed_ratio,
                                                   double threat_speed,
                                                   double reaction_time,
                                                   double capture_radius) {
  if (!(threat_speed > 0.0)) {
    throw std::invalid_argument("threat_speed (v_T) must be > 0");
  }
  if (!(reaction_time > 0.0)) {
    throw std::invalid_argument("reaction_time (t_r) must be > 0");
  }
  return make_threat_params(speed_ratio, threat_speed * reaction_time,
                            capture_radius);
}

/**
 * @brief Engagement-zone boundary distance for a given aspect angle.
 *
 * Even in the aspect and non-increasing in |aspect| on [0, pi]; always real
 * and positive because reach + capture_radius exceeds speed_ratio * reach.
 */
inline double bez_radius(const ThreatParams& p, double aspect) {
  const double offset = p.speed_ratio * p.reach;
  const double ratio = (p.reach + p.capture_radius) / offset;
  const double c = std::cos(aspect);
  return offset * (c + std::sqrt(c * c - 1.0 + ratio * ratio));
}

/// Radius of the disc from which no heading guarantees escape.
inline double no_escape_radius(const ThreatParams& p) {
  return (1.0 - p.speed_ratio) * p.reach + p.capture_radius;
}

/// Distance at which the boundary and tangency constructions coincide.
/// Strictly greater than reach + capture_radius.
inline double critical_distance(const ThreatParams& p) {
  return std::hypot(p.reach + p.capture_radius, p.speed_ratio * p.reach);
}

/// True when a point at the given range and aspect lies inside or on the
/// engagement zone.
inline bool bez_contains(const ThreatParams& p, double dist, double aspect) {
  if (!(dist >= 0.0)) {
    throw std::invalid_argument("bez_contains: distance must be >= 0");
  }
  return dist <= bez_radius(p, aspect);
}

/// Center of the circle of radius reach + capture_radius that traces the
/// zone boundary for a fixed agent heading: the threat position offset
/// against the heading direction.
inline Vec2 bez_boundary_center(const ThreatParams& p, const Vec2& threat_pos,
                                double heading) {
  return threat_pos - (p.speed_ratio * p.reach) * heading_vector(heading);
}

}  // namespace dmc
