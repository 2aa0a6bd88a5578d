#pragma once
/**
 * @file simulation.hpp
 * @brief Closed-loop scenario simulation with constraint monitoring.
 *
 * Forward-Euler kinematics with instantaneous heading commands; threats are
 * either static or pure-pursuit vehicles whose zone rides along. Each run is
 * deterministic given the scenario, control config and seed.
 */

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmc/controllers.hpp"
#include "dmc/scenario.hpp"

namespace dmc {

/// Advance the agent one Euler step with an instantaneous heading command.
inline AgentState step_agent(const AgentState& s, double heading_cmd,
                             double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_agent: dt must be > 0");
  AgentState out = s;
  out.heading = wrap_angle(heading_cmd);
  out.position = s.position + (s.speed * dt) * heading_vector(out.heading);
  return out;
}

/// Advance a threat one step. Static threats hold position; pure-pursuit
/// threats move toward the agent's current position and hold when coincident.
inline ThreatState step_threat(const ThreatState& t, const Vec2& agent_pos,
                               double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_threat: dt must be > 0");
  if (t.motion != ThreatMotion::PurePursuit || t.vehicle_speed <= 0.0) {
    return t;
  }
  const Vec2 d = agent_pos - t.position;
  if (d.x == 0.0 && d.y == 0.0) return t;
  ThreatState out = t;
  out.position = t.position + (t.vehicle_speed * dt) *
                                  heading_vector(bearing(t.position, agent_pos));
  return out;
}

struct TrajectoryRow {
  double t;
  Vec2 position;
  double heading;          ///< heading applied over the following step
  double dmc;              ///< signed cue value at the applied heading
  bool constraint_active;  ///< the nominal heading violated the threshold
  double risk;             ///< summed per-threat legacy risk
  std::vector<double> threat_distances;
};

struct TrajectoryRecord {
  std::vector<TrajectoryRow> rows;
  bool reached = false;
  bool captured = false;
  double arrival_time = std::numeric_limits<double>::quiet_NaN();
  double max_abs_dmc = 0.0;
  double accumulated_risk = 0.0;
  double path_length = 0.0;
};

/// Trapezoidal time-integral of the summed legacy-risk channel.
inline double accumulate_risk(const TrajectoryRecord& rec) {
  double acc = 0.0;
  for (std::size_t i = 1; i < rec.rows.size(); ++i) {
    acc += 0.5 * (rec.rows[i].t - rec.rows[i - 1].t) *
           (rec.rows[i].risk + rec.rows[i - 1].risk);
  }
  return acc;
}

/**
 * @brief Run a scenario to completion.
 *
 * Loop: recompute threat cones and the joint safe set, select a heading,
 * record a row, advance agent and threats. Terminates when the goal is
 * reached (within goal_tol), the agent is captured (range to any threat at
 * most its capture radius), or t exceeds t_max. The config normally comes
 * from the scenario's control block; sweeps pass modified copies.
 */
inline TrajectoryRecord simulate(const Scenario& scenario,
                                 const ControlConfig& cfg) {
  AgentState agent = scenario.agent;
  agent.heading = wrap_angle(agent.heading);
  std::vector<ThreatState> threats = scenario.threats;
  const double dt = scenario.sim.dt;
  const double t_max = scenario.sim.t_max;
  const double goal_tol = resolved_goal_tol(scenario);

  const bool use_mpc = cfg.controller == ControllerKind::Mpc;
  const MpcConfig mpc_cfg = cfg.mpc.value_or(MpcConfig{});
  const long replan_stride =
      use_mpc ? std::max<long>(1, std::lround(mpc_cfg.sample_time / dt)) : 1;
  std::mt19937 rng(mpc_cfg.seed);
  std::vector<double> prev_plan;
  double held_heading = agent.heading;
  int commit_dir = 0;
  long commit_until = -1;

  TrajectoryRecord rec;

  auto make_row = [&](double t, double applied, bool active,
                      std::vector<double> dists) {
    const HeadingSet safe = joint_safe_set(agent, threats, cfg.dmc_mode);
    double risk_sum = 0.0;
    for (std::size_t i = 0; i < threats.size(); ++i) {
      if (dists[i] <= 0.0) continue;
      const double aspect =
          wrap_angle(applied - bearing(agent.position, threats[i].position));
      risk_sum += risk_legacy(threats[i].params, dists[i], aspect);
    }
    rec.rows.push_back(TrajectoryRow{t, agent.position, wrap_angle(applied),
                                     dmc_multi(applied, safe).value, active,
                                     risk_sum, std::move(dists)});
  };

  for (long step = 0;; ++step) {
    const double t = step * dt;

    std::vector<double> dists(threats.size());
    bool captured = false;
    for (std::size_t i = 0; i < threats.size(); ++i) {
      dists[i] = distance(agent.position, threats[i].position);
      if (dists[i] <= threats[i].params.capture_radius) captured = true;
    }
    const bool reached =
        !captured && distance(agent.position, scenario.goal) <= goal_tol;

    if (captured || reached || t > t_max + 1e-12) {
      if (captured) {
        // terminal row without cone evaluation: bearings may be degenerate
        rec.rows.push_back(TrajectoryRow{t, agent.position, agent.heading, kPi,
                                         false, 0.0, std::move(dists)});
      } else {
        make_row(t, agent.heading, false, std::move(dists));
      }
      rec.captured = captured;
      rec.reached = reached;
      if (reached) rec.arrival_time = t;
      break;
    }

    const HeadingSet safe = joint_safe_set(agent, threats, cfg.dmc_mode);
    const double psi_nom = nominal_heading(agent.position, scenario.goal);
    const double nominal_cue =
        safe.is_empty() ? kPi : dmc_multi(psi_nom, safe).value;
    const bool active = std::abs(nominal_cue) > cfg.epsilon;

    double cmd;
    if (use_mpc) {
      if (step % replan_stride == 0) {
        const MpcPlan plan =
            mpc_plan(agent, scenario.goal, threats, cfg, rng,
                     prev_plan.empty() ? nullptr : &prev_plan);
        prev_plan = plan.headings;
        held_heading = plan.headings.front();
      }
      cmd = held_heading;
    } else if (safe.is_empty()) {
      cmd = least_violation_heading(agent, threats, cfg.dmc_mode);
    } else {
      int dir = 0;
      if (cfg.commit_steps > 0 && active) {
        if (step > commit_until) {
          commit_dir = nominal_cue >= 0.0 ? 1 : -1;
          commit_until = step + cfg.commit_steps;
        }
        dir = commit_dir;
      }
      cmd = detail::clip_to_safe(psi_nom, safe, cfg.epsilon, dir);
    }
    cmd = wrap_angle(cmd);

    make_row(t, cmd, active, std::move(dists));

    const Vec2 agent_before = agent.position;
    agent = step_agent(agent, cmd, dt);
    for (auto& th : threats) th = step_threat(th, agent_before, dt);
    if (!std::isfinite(agent.position.x) || !std::isfinite(agent.position.y) ||
        !std::isfinite(agent.heading)) {
      throw std::runtime_error("simulate: non-finite agent state at t=" +
                               std::to_string(t));
    }
  }

  for (const auto& row : rec.rows) {
    rec.max_abs_dmc = std::max(rec.max_abs_dmc, std::abs(row.dmc));
  }
  for (std::size_t i = 1; i < rec.rows.size(); ++i) {
    rec.path_length += distance(rec.rows[i - 1].position, rec.rows[i].position);
  }
  rec.accumulated_risk = accumulate_risk(rec);
  return rec;
}

}  // namespace dmc
