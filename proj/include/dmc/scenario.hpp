#pragma once
/**
 * @file scenario.hpp
 * @brief Scenario description and strict JSON ingestion.
 *
 * Scenario files carry angles in degrees; everything internal is radians,
 * converted once at this boundary. Unknown keys are rejected so a typo can
 * never silently alter a run.
 */

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "dmc/controllers.hpp"
#include "dmc/states.hpp"

namespace dmc {

struct SimParams {
  double dt = 0.01;
  double t_max = 50.0;
  std::optional<double> goal_tol;  ///< default: one step of travel
};

struct Scenario {
  AgentState agent;
  Vec2 goal;
  std::vector<ThreatState> threats;
  SimParams sim;
  ControlConfig control;
};

inline double resolved_goal_tol(const Scenario& sc) {
  return sc.sim.goal_tol ? *sc.sim.goal_tol : sc.agent.speed * sc.sim.dt;
}

namespace detail {

[[noreturn]] inline void fail_field(const std::string& path,
                                    const std::string& what) {
  throw std::invalid_argument("scenario: " + path + ": " + what);
}

inline void check_keys(const nlohmann::json& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail_field(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail_field(path + "." + it.key(), "unknown key");
  }
}

inline double require_number(const nlohmann::json& obj,
                             const std::string& path, const char* key) {
  if (!obj.contains(key)) fail_field(path + "." + key, "missing");
  const auto& v = obj.at(key);
  if (!v.is_number()) fail_field(path + "." + key, "expected a number");
  return v.get<double>();
}

inline double number_or(const nlohmann::json& obj, const std::string& path,
                        const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) fail_field(path + "." + key, "expected a number");
  return v.get<double>();
}

inline std::string string_or(const nlohmann::json& obj,
                             const std::string& path, const char* key,
                             const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) fail_field(path + "." + key, "expected a string");
  return v.get<std::string>();
}

inline ThreatState parse_threat(const nlohmann::json& j,
                                const std::string& path) {
  check_keys(j, path,
             {"x", "y", "mu", "R", "v_T_weapon", "t_r", "r", "motion",
              "vehicle_speed"});
  const double x = require_number(j, path, "x");
  const double y = require_number(j, path, "y");
  const double mu = require_number(j, path, "mu");
  if (!(mu > 0.0 && mu < 1.0)) fail_field(path + ".mu", "must be in (0,1)");
  const double r = require_number(j, path, "r");
  if (!(r >= 0.0)) fail_field(path + ".r", "must be >= 0");

  const bool has_reach = j.contains("R");
  const bool has_budget = j.contains("v_T_weapon") || j.contains("t_r");
  double reach = 0.0;
  if (has_budget) {
    if (!j.contains("v_T_weapon") || !j.contains("t_r")) {
      fail_field(path, "v_T_weapon and t_r must be given together");
    }
    const double v = require_number(j, path, "v_T_weapon");
    const double tr = require_number(j, path, "t_r");
    if (!(v > 0.0)) fail_field(path + ".v_T_weapon", "must be > 0");
    if (!(tr > 0.0)) fail_field(path + ".t_r", "must be > 0");
    reach = v * tr;
    if (has_reach) {
      const double stated = require_number(j, path, "R");
      if (std::abs(stated - reach) > 1e-9) {
        fail_field(path + ".R", "inconsistent with v_T_weapon * t_r");
      }
    }
  } else if (has_reach) {
    reach = require_number(j, path, "R");
  } else {
    fail_field(path, "either R or (v_T_weapon, t_r) is required");
  }
  if (!(reach > 0.0)) fail_field(path + ".R", "must be > 0");

  ThreatState t{};
  t.position = {x, y};
  t.params = ThreatParams{mu, reach, r};
  const std::string motion = string_or(j, path, "motion", "static");
  if (motion == "static") {
    t.motion = ThreatMotion::Static;
  } else if (motion == "pure_pursuit") {
    t.motion = ThreatMotion::PurePursuit;
  } else {
    fail_field(path + ".motion", "must be \"static\" or \"pure_pursuit\"");
  }
  t.vehicle_speed = number_or(j, path, "vehicle_speed", 0.0);
  if (!(t.vehicle_speed >= 0.0)) {
    fail_field(path + ".vehicle_speed", "must be >= 0");
  }
  return t;
}

inline MpcConfig parse_mpc(const nlohmann::json& j, const std::string& path) {
  check_keys(j, path,
             {"H", "ts", "penalty_weight", "restarts", "max_iterations",
              "seed"});
  MpcConfig cfg;
  const double h = number_or(j, path, "H", cfg.horizon_steps);
  if (!(h >= 1.0) || h != static_cast<int>(h)) {
    fail_field(path + ".H", "must be an integer >= 1");
  }
  cfg.horizon_steps = static_cast<int>(h);
  cfg.sample_time = number_or(j, path, "ts", cfg.sample_time);
  if (!(cfg.sample_time > 0.0)) fail_field(path + ".ts", "must be > 0");
  cfg.penalty_weight = number_or(j, path, "penalty_weight", cfg.penalty_weight);
  if (!(cfg.penalty_weight > 0.0)) {
    fail_field(path + ".penalty_weight", "must be > 0");
  }
  const double restarts = number_or(j, path, "restarts", cfg.restarts);
  if (!(restarts >= 1.0) || restarts != static_cast<int>(restarts)) {
    fail_field(path + ".restarts", "must be an integer >= 1");
  }
  cfg.restarts = static_cast<int>(restarts);
  const double iters = number_or(j, path, "max_iterations", cfg.max_iterations);
  if (!(iters >= 1.0) || iters != static_cast<int>(iters)) {
    fail_field(path + ".max_iterations", "must be an integer >= 1");
  }
  cfg.max_iterations = static_cast<int>(iters);
  const double seed = number_or(j, path, "seed", 0.0);
  if (seed < 0.0 || seed != static_cast<std::uint32_t>(seed)) {
    fail_field(path + ".seed", "must be a non-negative integer");
  }
  cfg.seed = static_cast<std::uint32_t>(seed);
  return cfg;
}

}  // namespace detail

/// Parse and validate a scenario document. Throws std::invalid_argument with
/// line information on parse errors and with the offending field path on
/// validation errors.
inline Scenario load_scenario(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t stop = std::min(e.byte, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw std::invalid_argument("scenario: parse error at line " +
                                std::to_string(line) + ": " + e.what());
  }

  detail::check_keys(j, "scenario",
                     {"agent", "goal", "threats", "sim", "control"});

  Scenario sc{};

  if (!j.contains("agent")) detail::fail_field("agent", "missing");
  const auto& agent = j.at("agent");
  detail::check_keys(agent, "agent", {"x", "y", "heading0", "speed"});
  sc.agent.position = {detail::require_number(agent, "agent", "x"),
                       detail::require_number(agent, "agent", "y")};
  sc.agent.heading =
      wrap_angle(deg_to_rad(detail::number_or(agent, "agent", "heading0", 0.0)));
  sc.agent.speed = detail::require_number(agent, "agent", "speed");
  if (!(sc.agent.speed > 0.0)) detail::fail_field("agent.speed", "must be > 0");

  if (!j.contains("goal")) detail::fail_field("goal", "missing");
  const auto& goal = j.at("goal");
  detail::check_keys(goal, "goal", {"x", "y"});
  sc.goal = {detail::require_number(goal, "goal", "x"),
             detail::require_number(goal, "goal", "y")};

  if (!j.contains("threats")) detail::fail_field("threats", "missing");
  const auto& threats = j.at("threats");
  if (!threats.is_array()) detail::fail_field("threats", "expected an array");
  for (std::size_t i = 0; i < threats.size(); ++i) {
    sc.threats.push_back(detail::parse_threat(
        threats[i], "threats[" + std::to_string(i) + "]"));
  }

  if (j.contains("sim")) {
    const auto& sim = j.at("sim");
    detail::check_keys(sim, "sim", {"dt", "t_max", "goal_tol"});
    sc.sim.dt = detail::number_or(sim, "sim", "dt", sc.sim.dt);
    if (!(sc.sim.dt > 0.0)) detail::fail_field("sim.dt", "must be > 0");
    sc.sim.t_max = detail::number_or(sim, "sim", "t_max", sc.sim.t_max);
    if (!(sc.sim.t_max > 0.0)) detail::fail_field("sim.t_max", "must be > 0");
    if (sim.contains("goal_tol")) {
      const double tol = detail::require_number(sim, "sim", "goal_tol");
      if (!(tol > 0.0)) detail::fail_field("sim.goal_tol", "must be > 0");
      sc.sim.goal_tol = tol;
    }
  }

  if (j.contains("control")) {
    const auto& control = j.at("control");
    detail::check_keys(control, "control",
                       {"controller", "epsilon_deg", "dmc_mode", "mpc"});
    const std::string controller =
        detail::string_or(control, "control", "controller", "simple");
    if (controller == "simple") {
      sc.control.controller = ControllerKind::Simple;
    } else if (controller == "mpc") {
      sc.control.controller = ControllerKind::Mpc;
    } else {
      detail::fail_field("control.controller",
                         "must be \"simple\" or \"mpc\"");
    }
    const double eps_deg =
        detail::number_or(control, "control", "epsilon_deg", 0.0);
    if (!(eps_deg >= 0.0 && eps_deg < 180.0)) {
      detail::fail_field("control.epsilon_deg", "must be in [0, 180)");
    }
    sc.control.epsilon = deg_to_rad(eps_deg);
    const std::string mode =
        detail::string_or(control, "control", "dmc_mode", "penetration");
    if (mode == "penetration") {
      sc.control.dmc_mode = CueVariant::Penetration;
    } else if (mode == "stayout") {
      sc.control.dmc_mode = CueVariant::Stayout;
    } else {
      detail::fail_field("control.dmc_mode",
                         "must be \"penetration\" or \"stayout\"");
    }
    if (control.contains("mpc")) {
      sc.control.mpc = detail::parse_mpc(control.at("mpc"), "control.mpc");
    }
  }
  if (sc.control.controller == ControllerKind::Mpc && !sc.control.mpc) {
    sc.control.mpc = MpcConfig{};
  }
  return sc;
}

/// Resolved scenario as a JSON document (defaults filled in, reach explicit,
/// angles back in degrees). Embedded in metrics output for provenance.
inline nlohmann::json scenario_to_json(const Scenario& sc) {
  nlohmann::json threats = nlohmann::json::array();
  for (const auto& t : sc.threats) {
    threats.push_back(
        {{"x", t.position.x},
         {"y", t.position.y},
         {"mu", t.params.speed_ratio},
         {"R", t.params.reach},
         {"r", t.params.capture_radius},
         {"motion",
          t.motion == ThreatMotion::Static ? "static" : "pure_pursuit"},
         {"vehicle_speed", t.vehicle_speed}});
  }
  nlohmann::json control = {
      {"controller",
       sc.control.controller == ControllerKind::Simple ? "simple" : "mpc"},
      {"epsilon_deg", rad_to_deg(sc.control.epsilon)},
      {"dmc_mode",
       sc.control.dmc_mode == CueVariant::Penetration ? "penetration"
                                                      : "stayout"}};
  if (sc.control.mpc) {
    control["mpc"] = {{"H", sc.control.mpc->horizon_steps},
                      {"ts", sc.control.mpc->sample_time},
                      {"penalty_weight", sc.control.mpc->penalty_weight},
                      {"restarts", sc.control.mpc->restarts},
                      {"max_iterations", sc.control.mpc->max_iterations},
                      {"seed", sc.control.mpc->seed}};
  }
  return {{"agent",
           {{"x", sc.agent.position.x},
            {"y", sc.agent.position.y},
            {"heading0", rad_to_deg(sc.agent.heading)},
            {"speed", sc.agent.speed}}},
          {"goal", {{"x", sc.goal.x}, {"y", sc.goal.y}}},
          {"threats", threats},
          {"sim",
           {{"dt", sc.sim.dt},
            {"t_max", sc.sim.t_max},
            {"goal_tol", sc.sim.goal_tol ? nlohmann::json(*sc.sim.goal_tol)
                                         : nlohmann::json(nullptr)}}},
          {"control", control}};
}

}  // namespace dmc
