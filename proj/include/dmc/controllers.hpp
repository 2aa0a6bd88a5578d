#pragma once
/**
 * @file controllers.hpp
 * @brief Heading selection under the maneuvering-cue path constraint.
 *
 * Two controllers share the constraint |cue| <= epsilon: a clipped
 * aim-at-goal feedback law, and a receding-horizon planner that minimizes
 * terminal distance to the goal subject to the per-sample cue constraint.
 */

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "dmc/safe_cone.hpp"

namespace dmc {

enum class ControllerKind { Simple, Mpc };

struct MpcConfig {
  int horizon_steps = 25;        ///< H; the plan holds H + 1 headings
  double sample_time = 0.07;     ///< prediction (and replan) interval
  double penalty_weight = 100.0; ///< constraint-violation weight
  int restarts = 8;              ///< multi-start count, >= 1
  int max_iterations = 50;       ///< coordinate-descent sweep cap
  std::uint32_t seed = 0;        ///< seeds the random restarts
};

struct ControlConfig {
  double epsilon = 0.0;  ///< cue threshold, radians, in [0, pi)
  CueVariant dmc_mode = CueVariant::Penetration;
  ControllerKind controller = ControllerKind::Simple;
  std::optional<MpcConfig> mpc;
  /// Optional switching-surface experiment: hold a chosen turn direction for
  /// this many engine steps (0 disables, the default).
  int commit_steps = 0;
};

/// Heading straight at the goal. Throws for coincident points.
inline double nominal_heading(const Vec2& agent, const Vec2& goal) {
  return bearing(agent, goal);
}

namespace detail {

/// Signed turn from psi to the nearest safe-set boundary in a forced
/// rotational direction (+1 counterclockwise, -1 clockwise).
inline double boundary_turn_directed(double psi, const HeadingSet& safe,
                                     int dir) {
  double best = kTwoPi;
  for (const auto& a : safe.arcs()) {
    for (const double endpoint : {a.lo, a.hi()}) {
      const double fwd = wrap_two_pi((endpoint - psi) * dir);
      best = std::min(best, fwd);
    }
  }
  return dir * best;
}

/**
 * @brief Clip a heading to the epsilon-inflated safe set.
 *
 * Returns the heading unchanged when its cue is within threshold; otherwise
 * the nearest heading whose cue magnitude equals epsilon. forced_dir picks
 * the clip side during a commitment window (0 = nearest). The caller must
 * handle the empty set.
 */
inline double clip_to_safe(double psi_nom, const HeadingSet& safe,
                           double epsilon, int forced_dir = 0) {
  const DmcResult cue = dmc_multi(psi_nom, safe);
  if (std::abs(cue.value) <= epsilon) return wrap_angle(psi_nom);
  double turn = cue.value;
  if (forced_dir != 0 && (turn > 0.0) != (forced_dir > 0)) {
    turn = boundary_turn_directed(psi_nom, safe, forced_dir);
  }
  return wrap_angle(psi_nom + turn - sign_ccw(turn) * epsilon);
}

}  // namespace detail

/**
 * @brief One step of the clipped aim-at-goal controller.
 *
 * Evaluates the multi-threat cue at the candidate nominal heading and clips
 * it into the epsilon-inflated safe set; falls back to the least-violation
 * heading when no safe heading exists.
 */
inline double simple_step(const AgentState& agent, const Vec2& goal,
                          std::span<const ThreatState> threats,
                          const ControlConfig& cfg) {
  const double psi_nom = nominal_heading(agent.position, goal);
  const HeadingSet safe = joint_safe_set(agent, threats, cfg.dmc_mode);
  if (safe.is_empty()) {
    return least_violation_heading(agent, threats, cfg.dmc_mode);
  }
  return detail::clip_to_safe(psi_nom, safe, cfg.epsilon);
}

/**
 * @brief Switching-surface diagnostic.
 *
 * Signed imbalance between the nominal heading's wrap-aware distances to the
 * two boundaries of the region (safe arc or unsafe gap) containing it; zero
 * exactly on a switching surface. nullopt when the safe set has no boundary
 * (full circle) or is empty.
 */
inline std::optional<double> switching_surface_metric(
    const AgentState& agent, const Vec2& goal,
    std::span<const ThreatState> threats, const ControlConfig& cfg) {
  const HeadingSet safe = joint_safe_set(agent, threats, cfg.dmc_mode);
  if (safe.is_full() || safe.is_empty()) return std::nullopt;
  const double psi_nom = nominal_heading(agent.position, goal);
  const auto& arcs = safe.arcs();
  for (const auto& a : arcs) {
    if (a.contains(psi_nom)) {
      return angular_distance(psi_nom, a.lo) -
             angular_distance(psi_nom, a.hi());
    }
  }
  // psi_nom sits in an unsafe gap: its boundaries are the end of the
  // previous safe arc and the start of the next one.
  const std::size_t n = arcs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double gap_start = arcs[i].hi();
    const double next_lo =
        (i + 1 < n) ? arcs[i + 1].lo : arcs.front().lo + kTwoPi;
    const AngularInterval gap{wrap_angle(gap_start),
                              std::max(0.0, next_lo - gap_start)};
    if (gap.contains(psi_nom)) {
      return angular_distance(psi_nom, next_lo) -
             angular_distance(psi_nom, gap_start);
    }
  }
  return std::nullopt;
}

/// Legacy depth-ratio risk: boundary distance over range minus one inside
/// the zone, zero outside. Continuous at the boundary and decreasing in
/// range inside it.
inline double risk_legacy(const ThreatParams& p, double dist, double aspect) {
  if (!(dist > 0.0)) {
    throw std::invalid_argument("risk_legacy: distance must be positive");
  }
  const double radius = bez_radius(p, wrap_angle(aspect));
  return dist <= radius ? radius / dist - 1.0 : 0.0;
}

struct MpcPlan {
  std::vector<double> headings;  ///< H + 1 entries; apply the first
  bool feasible = false;         ///< max per-sample violation <= 1e-6
  /// Goal distance achieved by the plan: the smallest sample distance, which
  /// equals the end-of-horizon distance whenever the goal lies beyond reach
  /// of the horizon.
  double goal_distance = 0.0;
  double objective = 0.0;
};

namespace detail {

/// Penalized horizon objective with prefix caches so single-coordinate
/// trials only resimulate the suffix.
class MpcEvaluator {
 public:
  MpcEvaluator(const AgentState& agent, const Vec2& goal,
               std::span<const ThreatState> threats, const ControlConfig& cfg,
               const MpcConfig& mpc)
      : start_(agent.position),
        goal_(goal),
        threats_(threats),
        variant_(cfg.dmc_mode),
        epsilon_(cfg.epsilon),
        weight_(mpc.penalty_weight),
        step_(agent.speed * mpc.sample_time),
        horizon_(mpc.horizon_steps) {
    pos_.resize(horizon_ + 1);
    prefix_pen_.resize(horizon_ + 2);
    prefix_hold_.resize(horizon_ + 2);
    prefix_min_.resize(horizon_ + 2,
                       std::numeric_limits<double>::infinity());
    pos_[0] = start_;  // replay_from(0, ...) rebuilds everything after it
  }

  /// Full evaluation of a sequence; refreshes all caches.
  double evaluate(const std::vector<double>& seq) {
    return replay_from(seq, 0, seq[0], true);
  }

  /// Objective with coordinate k replaced by trial; caches untouched.
  double trial(const std::vector<double>& seq, int k, double trial_value) {
    return replay_from(seq, k, trial_value, false);
  }

  /// Accept a new value for coordinate k and refresh the suffix caches.
  double accept(std::vector<double>& seq, int k, double value) {
    seq[k] = value;
    return replay_from(seq, k, value, true);
  }

  /// Largest per-sample constraint violation |cue| - epsilon of the cached
  /// sequence (call evaluate first).
  double max_violation(const std::vector<double>& seq) const {
    double worst = -kPi;
    Vec2 p = start_;
    for (int j = 0; j <= horizon_; ++j) {
      worst = std::max(worst, cue_magnitude(p, seq[j]) - epsilon_);
      if (j < horizon_) p = p + step_ * heading_vector(seq[j]);
    }
    return worst;
  }

  /// Goal distance of the cached sequence (minimum over samples).
  double goal_distance() const { return prefix_min_.back(); }

 private:
  double cue_magnitude(const Vec2& p, double psi) const {
    return cue_eval_.abs_cue(p, psi, threats_, variant_);
  }

  double violation_term(const Vec2& p, double psi) const {
    const double excess = cue_magnitude(p, psi) - epsilon_;
    return excess > 0.0 ? excess * excess : 0.0;
  }

  // The distance term is the closest sample approach to the goal, which is
  // the end-of-horizon distance whenever the goal is out of reach within the
  // horizon. A pure end-of-horizon term turns degenerate once the goal gets
  // closer than the horizon: every plan that touches the goal at the end
  // ties, leaving the applied first heading arbitrary and the vehicle
  // orbiting. The average sample distance enters far below route-choice
  // scales and orders the remaining ties toward early arrival.
  static constexpr double kArrivalTieBreak = 1e-6;

  double replay_from(const std::vector<double>& seq, int k, double value_k,
                     bool commit) {
    double pen = prefix_pen_[k];
    double hold = prefix_hold_[k];
    double closest = prefix_min_[k];
    Vec2 p = pos_[k];
    for (int j = k; j <= horizon_; ++j) {
      const double psi = (j == k) ? value_k : seq[j];
      const double v = violation_term(p, psi);
      const double h = distance(p, goal_);
      pen += v;
      hold += h;
      closest = std::min(closest, h);
      if (commit) {
        pos_[j] = p;
        prefix_pen_[j + 1] = pen;
        prefix_hold_[j + 1] = hold;
        prefix_min_[j + 1] = closest;
      }
      if (j < horizon_) p = p + step_ * heading_vector(psi);
    }
    return closest + weight_ * pen +
           kArrivalTieBreak * hold / (horizon_ + 1);
  }

  Vec2 start_;
  Vec2 goal_;
  std::span<const ThreatState> threats_;
  CueVariant variant_;
  double epsilon_;
  double weight_;
  double step_;
  int horizon_;
  std::vector<Vec2> pos_;          // position before applying heading j
  std::vector<double> prefix_pen_; // prefix sums of the violation terms
  std::vector<double> prefix_hold_; // prefix sums of sample-goal distances
  std::vector<double> prefix_min_;  // prefix minima of sample-goal distances
  mutable JointCueEvaluator cue_eval_;
};

/// Golden-section line search returning the best evaluated point.
template <typename F>
inline std::pair<double, double> golden_section_min(F&& f, double a, double b,
                                                    int iterations) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  double best_x = (f1 <= f2) ? x1 : x2;
  double best_f = std::min(f1, f2);
  for (int i = 0; i < iterations; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
    if (f1 < best_f) {
      best_f = f1;
      best_x = x1;
    }
    if (f2 < best_f) {
      best_f = f2;
      best_x = x2;
    }
  }
  return {best_x, best_f};
}

/// Horizon replay of the simple controller from the given state.
inline std::vector<double> simple_replay_sequence(
    const AgentState& agent, const Vec2& goal,
    std::span<const ThreatState> threats, const ControlConfig& cfg,
    int horizon, double step_len) {
  std::vector<double> seq(horizon + 1, agent.heading);
  AgentState a = agent;
  for (int k = 0; k <= horizon; ++k) {
    double h = a.heading;
    if (distance(a.position, goal) > 1e-12) {
      h = simple_step(a, goal, threats, cfg);
    }
    seq[k] = h;
    a.heading = h;
    if (k < horizon) a.position = a.position + step_len * heading_vector(h);
  }
  return seq;
}

}  // namespace detail

/**
 * @brief Receding-horizon plan: a heading sequence approximately minimizing
 * terminal distance to the goal subject to the per-sample cue constraint.
 *
 * Threats are treated as stationary over the horizon; the engine applies the
 * first heading and replans. Solved by multi-start coordinate-wise
 * golden-section descent on the penalized objective; starts are the shifted
 * previous plan, the constant nominal heading, a horizon replay of the
 * simple controller (which makes the plan at least as good as that replay),
 * and seeded random constants. Reports feasible = false when no restart
 * satisfies the constraint within 1e-6 (best effort).
 */
inline MpcPlan mpc_plan(const AgentState& agent, const Vec2& goal,
                        std::span<const ThreatState> threats,
                        const ControlConfig& cfg, std::mt19937& rng,
                        const std::vector<double>* previous = nullptr) {
  if (!cfg.mpc.has_value()) {
    throw std::invalid_argument("mpc_plan: missing MpcConfig");
  }
  const MpcConfig& mpc = *cfg.mpc;
  if (mpc.horizon_steps < 1) {
    throw std::invalid_argument("mpc_plan: horizon_steps must be >= 1");
  }
  const int n = mpc.horizon_steps + 1;
  const double step_len = agent.speed * mpc.sample_time;

  const double psi_nom = (distance(agent.position, goal) > 0.0)
                             ? nominal_heading(agent.position, goal)
                             : agent.heading;

  std::vector<std::vector<double>> starts;
  if (previous != nullptr && static_cast<int>(previous->size()) == n) {
    std::vector<double> shifted(n);
    for (int i = 0; i < n; ++i) {
      shifted[i] = (*previous)[std::min(i + 1, n - 1)];
    }
    starts.push_back(std::move(shifted));
  } else {
    starts.emplace_back(n, agent.heading);
  }
  starts.emplace_back(n, psi_nom);
  starts.push_back(detail::simple_replay_sequence(agent, goal, threats, cfg,
                                                  mpc.horizon_steps, step_len));
  // side probes so the two ways around an obstacle both get a deterministic
  // local search, independent of the random draws
  starts.emplace_back(n, wrap_angle(psi_nom + kPi / 4.0));
  starts.emplace_back(n, wrap_angle(psi_nom - kPi / 4.0));
  std::uniform_real_distribution<double> uniform(-kPi, kPi);
  for (int r = 5; r < mpc.restarts; ++r) {
    starts.emplace_back(n, uniform(rng));
  }

  detail::MpcEvaluator evaluator(agent, goal, threats, cfg, mpc);
  constexpr int kLineSearchIters = 34;

  MpcPlan best;
  bool have_best = false;
  for (auto& seq : starts) {
    double obj = evaluator.evaluate(seq);
    for (int sweep = 0; sweep < mpc.max_iterations; ++sweep) {
      const double before = obj;
      for (int k = 0; k < n; ++k) {
        auto [x, fx] = detail::golden_section_min(
            [&](double v) { return evaluator.trial(seq, k, v); },
            seq[k] - kPi, seq[k] + kPi, kLineSearchIters);
        if (fx < obj) obj = evaluator.accept(seq, k, x);
      }
      if (before - obj < 1e-9) break;
    }
    if (!have_best || obj < best.objective) {
      best.objective = obj;
      best.headings = seq;
      best.goal_distance = evaluator.goal_distance();
      best.feasible = evaluator.max_violation(seq) <= 1e-6;
      have_best = true;
    }
  }
  for (double& h : best.headings) h = wrap_angle(h);
  return best;
}

}  // namespace dmc
