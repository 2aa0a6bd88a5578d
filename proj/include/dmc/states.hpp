#pragma once
/**
 * @file states.hpp
 * @brief Agent and threat state types shared by the cone, controller and
 * simulation layers.
 */

#include "dmc/engagement_zone.hpp"
#include "dmc/vec2.hpp"

namespace dmc {

struct AgentState {
  Vec2 position;
  double heading = 0.0;  ///< radians, wrapped to (-pi, pi]
  double speed = 1.0;    ///< constant over a run, > 0
};

enum class ThreatMotion { Static, PurePursuit };

struct ThreatState {
  Vec2 position;
  ThreatParams params;
  ThreatMotion motion = ThreatMotion::Static;
  double vehicle_speed = 0.0;  ///< pursuit speed; the zone rides with the vehicle
};

}  // namespace dmc
