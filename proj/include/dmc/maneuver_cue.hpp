#pragma once
/**
 * @file maneuver_cue.hpp
 * @brief Single-threat dynamic maneuvering cue (DMC).
 *
 * The cue is the signed heading change that takes the agent to the nearest
 * safe aspect: onto the engagement-zone boundary (penetration cue) or onto a
 * course that keeps it outside the zone (stay-out cue, tangent to the
 * capturability circle when far enough). Zero means no maneuver is required;
 * saturation at +/-pi means no heading escapes.
 *
 * Sign convention: the cue is the turn to apply, so heading + value is the
 * commanded escape heading. Ties at aspect zero break counterclockwise.
 */

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dmc/angles.hpp"
#include "dmc/engagement_zone.hpp"

namespace dmc {

enum class ConeKind { Cone, AllSafe, AllUnsafe };

/// Half-width of the unsafe aspect cone, or a degenerate classification.
struct UnsafeCone {
  ConeKind kind;
  double half_width;  ///< in [0, pi]; 0 when all safe, pi when all unsafe
};

enum class CueMode { AllSafe, Boundary, Tangent, AllUnsafe };

struct DmcResult {
  double value;    ///< signed turn to apply, |value| <= pi
  double xi_star;  ///< unsafe-cone half width (NaN for heading-set cues)
  CueMode mode;
  double nearest_safe_aspect;  ///< aspect (heading, for set cues) after the turn
};

namespace detail {
// Inverse-trig arguments are clamped only within this distance of +-1;
// beyond it the geometry is degenerate and classified AllSafe/AllUnsafe.
inline constexpr double kArgClampTol = 1e-12;
}  // namespace detail

/**
 * @brief Aspect half-width of the unsafe cone for reaching the zone boundary.
 *
 * AllSafe when the range exceeds the farthest zone reach (every heading is
 * safe); AllUnsafe when inside the no-escape disc (no heading is).
 */
inline UnsafeCone boundary_cone(const ThreatParams& p, double dist) {
  if (!(dist > 0.0)) {
    throw std::invalid_argument("boundary_cone: distance must be positive");
  }
  const double offset = p.speed_ratio * p.reach;
  const double cap = p.reach + p.capture_radius;
  double arg = (dist * dist + offset * offset - cap * cap) / (2.0 * offset * dist);
  if (arg > 1.0) {
    if (arg > 1.0 + detail::kArgClampTol) return {ConeKind::AllSafe, 0.0};
    arg = 1.0;
  } else if (arg < -1.0) {
    if (arg < -1.0 - detail::kArgClampTol) return {ConeKind::AllUnsafe, kPi};
    arg = -1.0;
  }
  return {ConeKind::Cone, std::acos(arg)};
}

/// Aspect at which the agent's course is tangent to the capturability circle.
/// Defined for ranges at or beyond reach + capture_radius.
inline double tangent_aspect(const ThreatParams& p, double dist) {
  const double cap = p.reach + p.capture_radius;
  if (!(dist >= cap)) {
    throw std::invalid_argument(
        "tangent_aspect: distance inside capturability region");
  }
  double arg = cap / dist;
  if (arg > 1.0) arg = 1.0;
  return std::asin(arg);
}

/// Unsafe-cone half width for the stay-out cue: tangency at or beyond the
/// critical distance, zone-boundary aspect below it. The branches agree at
/// the critical distance.
inline UnsafeCone stayout_cone(const ThreatParams& p, double dist) {
  if (!(dist > 0.0)) {
    throw std::invalid_argument("stayout_cone: distance must be positive");
  }
  if (dist >= critical_distance(p)) {
    return {ConeKind::Cone, tangent_aspect(p, dist)};
  }
  return boundary_cone(p, dist);
}

namespace detail {

inline DmcResult cue_from_cone(const UnsafeCone& cone, double aspect,
                               CueMode cone_mode) {
  if (cone.kind == ConeKind::AllSafe) {
    return {0.0, 0.0, CueMode::AllSafe, aspect};
  }
  if (cone.kind == ConeKind::AllUnsafe) {
    const double s = sign_ccw(aspect);
    return {s * kPi, kPi, CueMode::AllUnsafe, s * kPi};
  }
  const double hw = cone.half_width;
  const double mag = std::abs(aspect);
  if (mag >= hw) return {0.0, hw, cone_mode, aspect};
  const double s = sign_ccw(aspect);
  return {s * (hw - mag), hw, cone_mode, s * hw};
}

}  // namespace detail

/// Signed turn that puts the agent onto the engagement-zone boundary, zero
/// when the current aspect is already outside the unsafe cone.
inline DmcResult dmc_penetration(const ThreatParams& p, double dist,
                                 double aspect) {
  return detail::cue_from_cone(boundary_cone(p, dist), wrap_angle(aspect),
                               CueMode::Boundary);
}

/// Signed turn onto a stay-out course. Zero whenever the agent is outside
/// the zone at its current aspect, so this cue stays inactive until the
/// boundary is actually reached.
inline DmcResult dmc_stayout(const ThreatParams& p, double dist,
                             double aspect) {
  if (!(dist > 0.0)) {
    throw std::invalid_argument("dmc_stayout: distance must be positive");
  }
  const double xi = wrap_angle(aspect);
  const CueMode branch = (dist >= critical_distance(p)) ? CueMode::Tangent
                                                        : CueMode::Boundary;
  const UnsafeCone cone = stayout_cone(p, dist);
  if (cone.kind == ConeKind::AllUnsafe) {
    return detail::cue_from_cone(cone, xi, branch);
  }
  if (dist > bez_radius(p, xi)) {
    const CueMode mode =
        (dist > bez_radius(p, 0.0)) ? CueMode::AllSafe : branch;
    const double hw = (cone.kind == ConeKind::Cone) ? cone.half_width : 0.0;
    return {0.0, hw, mode, xi};
  }
  return detail::cue_from_cone(cone, xi, branch);
}

}  // namespace dmc
