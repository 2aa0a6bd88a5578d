// Closed-loop engine: kinematics steps, threat motion, termination,
// metrics and determinism.

#include <gtest/gtest.h>

#include "dmc/io.hpp"
#include "dmc/simulation.hpp"

using namespace dmc;

namespace {

Scenario basic_scenario() {
  Scenario sc{};
  sc.agent = {{0, 0}, 0.0, 1.0};
  sc.goal = {1, 0};
  sc.sim.dt = 0.01;
  sc.sim.t_max = 50.0;
  return sc;
}

ThreatState static_threat(double x, double y, double mu, double reach,
                          double capture) {
  return ThreatState{{x, y}, make_threat_params(mu, reach, capture),
                     ThreatMotion::Static, 0.0};
}

}  // namespace

TEST(StepAgent, EulerAdvance) {
  const AgentState s{{0, 0}, 0.0, 1.0};
  const AgentState fwd = step_agent(s, 0.0, 0.1);
  EXPECT_NEAR(fwd.position.x, 0.1, 1e-15);
  EXPECT_NEAR(fwd.position.y, 0.0, 1e-15);
  const AgentState up = step_agent(s, kPi / 2.0, 0.1);
  EXPECT_NEAR(up.position.x, 0.0, 1e-15);
  EXPECT_NEAR(up.position.y, 0.1, 1e-15);

  AgentState walk{{0, 0}, 0.0, 1.0};
  for (int i = 0; i < 10; ++i) walk = step_agent(walk, 0.0, 0.1);
  EXPECT_NEAR(walk.position.x, 1.0, 1e-12);
  EXPECT_THROW(step_agent(s, 0.0, 0.0), std::invalid_argument);
}

TEST(StepThreat, StaticAndPursuit) {
  const ThreatState st = static_threat(0, 0, 0.5, 0.9, 0.15);
  const ThreatState same = step_threat(st, {1, 0}, 0.1);
  EXPECT_EQ(same.position.x, 0.0);
  EXPECT_EQ(same.position.y, 0.0);

  ThreatState pp = st;
  pp.motion = ThreatMotion::PurePursuit;
  pp.vehicle_speed = 0.6;
  const ThreatState chased = step_threat(pp, {1, 0}, 0.1);
  EXPECT_NEAR(chased.position.x, 0.06, 1e-12);
  EXPECT_NEAR(chased.position.y, 0.0, 1e-12);

  // coincident with the agent: hold position
  const ThreatState held = step_threat(pp, {0, 0}, 0.1);
  EXPECT_EQ(held.position.x, 0.0);

  // speed is conserved step to step
  ThreatState runner = pp;
  Vec2 prev = runner.position;
  for (int i = 0; i < 50; ++i) {
    runner = step_threat(runner, {3, 4}, 0.01);
    EXPECT_NEAR(distance(prev, runner.position), 0.6 * 0.01, 1e-9);
    prev = runner.position;
  }
}

TEST(Simulate, StraightLineArrival) {
  const Scenario sc = basic_scenario();
  const TrajectoryRecord rec = simulate(sc, sc.control);
  EXPECT_TRUE(rec.reached);
  EXPECT_FALSE(rec.captured);
  EXPECT_NEAR(rec.arrival_time, 1.0, sc.sim.dt + 1e-12);
  EXPECT_NEAR(rec.path_length, rec.arrival_time * sc.agent.speed, 1e-9);
  EXPECT_EQ(rec.accumulated_risk, 0.0);
  EXPECT_EQ(rec.max_abs_dmc, 0.0);
}

TEST(Simulate, SpeedConservedBetweenRows) {
  Scenario sc = basic_scenario();
  sc.goal = {3, 1};
  sc.threats.push_back(static_threat(1.5, 0.4, 0.5, 0.9, 0.15));
  const TrajectoryRecord rec = simulate(sc, sc.control);
  ASSERT_GT(rec.rows.size(), 2u);
  for (std::size_t i = 1; i < rec.rows.size(); ++i) {
    EXPECT_NEAR(distance(rec.rows[i - 1].position, rec.rows[i].position),
                sc.agent.speed * sc.sim.dt, 1e-9);
  }
}

TEST(Simulate, CaptureTerminates) {
  Scenario sc = basic_scenario();
  sc.goal = {5, 0};
  // the agent starts already within capture range
  sc.threats.push_back(static_threat(0.1, 0.0, 0.9, 0.2, 0.9));
  const TrajectoryRecord rec = simulate(sc, sc.control);
  EXPECT_TRUE(rec.captured);
  EXPECT_FALSE(rec.reached);
  EXPECT_TRUE(std::isnan(rec.arrival_time));
  EXPECT_EQ(rec.rows.size(), 1u);
}

TEST(Simulate, TimeoutLeavesFlagsClear) {
  Scenario sc = basic_scenario();
  sc.goal = {100, 0};
  sc.sim.t_max = 0.5;
  const TrajectoryRecord rec = simulate(sc, sc.control);
  EXPECT_FALSE(rec.reached);
  EXPECT_FALSE(rec.captured);
  EXPECT_GE(rec.rows.back().t, 0.5 - 1e-9);
}

TEST(Simulate, RowsStrictlyIncreasingInTime) {
  Scenario sc = basic_scenario();
  sc.goal = {2, 0};
  sc.threats.push_back(static_threat(1.0, 0.1, 0.5, 0.9, 0.15));
  const TrajectoryRecord rec = simulate(sc, sc.control);
  for (std::size_t i = 1; i < rec.rows.size(); ++i) {
    EXPECT_GT(rec.rows[i].t, rec.rows[i - 1].t);
  }
}

TEST(Simulate, DtRefinementIsStable) {
  Scenario sc = basic_scenario();
  sc.goal = {2, 0};
  const TrajectoryRecord coarse = simulate(sc, sc.control);
  Scenario fine = sc;
  fine.sim.dt = sc.sim.dt / 2.0;
  const TrajectoryRecord refined = simulate(fine, fine.control);
  ASSERT_TRUE(coarse.reached);
  ASSERT_TRUE(refined.reached);
  EXPECT_LE(std::abs(coarse.arrival_time - refined.arrival_time),
            2.0 * sc.agent.speed * sc.sim.dt + 1e-12);
}

TEST(Simulate, ConstraintHoldsAlongTrajectory) {
  Scenario sc = basic_scenario();
  sc.agent.position = {-2.5, 0.0};
  sc.goal = {2.5, 0};
  sc.threats.push_back(static_threat(0.0, 0.0, 0.5, 0.9, 0.15));
  for (const double eps_deg : {0.0, 10.0}) {
    ControlConfig cfg = sc.control;
    cfg.epsilon = deg_to_rad(eps_deg);
    const TrajectoryRecord rec = simulate(sc, cfg);
    EXPECT_TRUE(rec.reached);
    for (const auto& row : rec.rows) {
      EXPECT_LE(std::abs(row.dmc), cfg.epsilon + 1e-6) << "t=" << row.t;
    }
  }
}

TEST(Simulate, DeterministicRecords) {
  Scenario sc = basic_scenario();
  sc.agent.position = {-2.0, 0.1};
  sc.goal = {2.5, 0};
  sc.threats.push_back(static_threat(0.0, 0.0, 0.5, 0.9, 0.15));
  sc.threats.push_back(static_threat(0.8, 0.9, 0.5, 0.8, 0.1));

  const std::string a = trajectory_csv(simulate(sc, sc.control));
  const std::string b = trajectory_csv(simulate(sc, sc.control));
  EXPECT_EQ(a, b);

  ControlConfig mpc_cfg = sc.control;
  mpc_cfg.controller = ControllerKind::Mpc;
  MpcConfig mpc{};
  mpc.horizon_steps = 6;
  mpc.sample_time = 0.1;
  mpc.restarts = 4;
  mpc.max_iterations = 8;
  mpc.seed = 5;
  mpc_cfg.mpc = mpc;
  Scenario sc_mpc = sc;
  sc_mpc.sim.t_max = 8.0;
  const std::string m1 = trajectory_csv(simulate(sc_mpc, mpc_cfg));
  const std::string m2 = trajectory_csv(simulate(sc_mpc, mpc_cfg));
  EXPECT_EQ(m1, m2);
}

TEST(AccumulateRisk, TrapezoidAndZeroOutside) {
  TrajectoryRecord rec;
  rec.rows.push_back({0.0, {0, 0}, 0, 0, false, 1.0, {}});
  rec.rows.push_back({1.0, {0, 0}, 0, 0, false, 1.0, {}});
  rec.rows.push_back({2.0, {0, 0}, 0, 0, false, 1.0, {}});
  EXPECT_NEAR(accumulate_risk(rec), 2.0, 1e-15);

  Scenario sc = basic_scenario();
  sc.goal = {2, 0};
  sc.threats.push_back(static_threat(1.0, 3.0, 0.5, 0.9, 0.15));
  const TrajectoryRecord run = simulate(sc, sc.control);
  EXPECT_EQ(accumulate_risk(run), 0.0);
}
