#pragma once
/**
 * @file io.hpp
 * @brief Trajectory/metrics serialization, field maps and threshold sweeps.
 */

#include <cstdio>
#include <future>
#include <ostream>
#include <string>
#include <vector>

#include "dmc/simulation.hpp"

namespace dmc {

namespace detail {

inline void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  out += buf;
}

}  // namespace detail

/// Trajectory CSV: header t,x,y,psi,dmc,active,risk,d_1..d_N with one
/// distance column per threat, 12 significant digits.
inline std::string trajectory_csv(const TrajectoryRecord& rec) {
  std::string out = "t,x,y,psi,dmc,active,risk";
  const std::size_t n_threats =
      rec.rows.empty() ? 0 : rec.rows.front().threat_distances.size();
  for (std::size_t i = 1; i <= n_threats; ++i) {
    out += ",d_" + std::to_string(i);
  }
  out += "\n";
  for (const auto& row : rec.rows) {
    detail::append_number(out, row.t);
    out += ',';
    detail::append_number(out, row.position.x);
    out += ',';
    detail::append_number(out, row.position.y);
    out += ',';
    detail::append_number(out, row.heading);
    out += ',';
    detail::append_number(out, row.dmc);
    out += ',';
    out += row.constraint_active ? '1' : '0';
    out += ',';
    detail::append_number(out, row.risk);
    for (const double d : row.threat_distances) {
      out += ',';
      detail::append_number(out, d);
    }
    out += '\n';
  }
  return out;
}

inline void write_trajectory_csv(const TrajectoryRecord& rec,
                                 std::ostream& os) {
  os << trajectory_csv(rec);
}

/// Run summary plus the resolved scenario for provenance.
inline nlohmann::json metrics_json(const TrajectoryRecord& rec,
                                   const Scenario& sc) {
  return {{"arrival_time", rec.reached ? nlohmann::json(rec.arrival_time)
                                       : nlohmann::json(nullptr)},
          {"reached", rec.reached},
          {"captured", rec.captured},
          {"max_dmc", rec.max_abs_dmc},
          {"accumulated_risk", rec.accumulated_risk},
          {"path_length", rec.path_length},
          {"scenario", scenario_to_json(sc)}};
}

struct FieldGrid {
  double xmin, xmax, ymin, ymax;
  int nx, ny;
};

/// |cue| and zone membership sampled on cell centers, row-major by y then x.
struct FieldMap {
  FieldGrid grid;
  std::vector<double> abs_dmc;
  std::vector<unsigned char> inside;

  double x_center(int ix) const {
    return grid.xmin + (ix + 0.5) * (grid.xmax - grid.xmin) / grid.nx;
  }
  double y_center(int iy) const {
    return grid.ymin + (iy + 0.5) * (grid.ymax - grid.ymin) / grid.ny;
  }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * grid.nx + ix;
  }
};

/**
 * @brief Evaluate |cue| for a fixed heading over a position grid.
 *
 * Cells inside a no-escape disc carry pi. The zone-membership channel lets
 * the cue's zero/positive transition be checked against the zone boundary.
 */
inline FieldMap compute_fieldmap(const Scenario& sc, double heading,
                                 const FieldGrid& grid, CueVariant mode) {
  if (grid.nx < 2 || grid.ny < 2) {
    throw std::invalid_argument("fieldmap: nx and ny must be >= 2");
  }
  if (!(grid.xmax > grid.xmin) || !(grid.ymax > grid.ymin)) {
    throw std::invalid_argument("fieldmap: degenerate range");
  }
  heading = wrap_angle(heading);
  FieldMap fm{grid, {}, {}};
  fm.abs_dmc.resize(static_cast<std::size_t>(grid.nx) * grid.ny);
  fm.inside.resize(fm.abs_dmc.size());
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const Vec2 p{fm.x_center(ix), fm.y_center(iy)};
      bool coincident = false;
      bool inside = false;
      for (const auto& t : sc.threats) {
        const double d = distance(p, t.position);
        if (d == 0.0) {
          coincident = true;
          break;
        }
        const double aspect = wrap_angle(heading - bearing(p, t.position));
        inside = inside || bez_contains(t.params, d, aspect);
      }
      double value = kPi;
      if (!coincident) {
        const AgentState probe{p, heading, 1.0};
        const HeadingSet safe = joint_safe_set(probe, sc.threats, mode);
        value = std::abs(dmc_multi(heading, safe).value);
      } else {
        inside = true;
      }
      const std::size_t idx = fm.index(ix, iy);
      fm.abs_dmc[idx] = value;
      fm.inside[idx] = inside ? 1 : 0;
    }
  }
  return fm;
}

/// Field-map CSV: x,y,abs_dmc,inside rows over cell centers.
inline std::string fieldmap_csv(const FieldMap& fm) {
  std::string out = "x,y,abs_dmc,inside\n";
  for (int iy = 0; iy < fm.grid.ny; ++iy) {
    for (int ix = 0; ix < fm.grid.nx; ++ix) {
      const std::size_t idx = fm.index(ix, iy);
      detail::append_number(out, fm.x_center(ix));
      out += ',';
      detail::append_number(out, fm.y_center(iy));
      out += ',';
      detail::append_number(out, fm.abs_dmc[idx]);
      out += ',';
      out += fm.inside[idx] ? '1' : '0';
      out += '\n';
    }
  }
  return out;
}

struct SweepRow {
  double epsilon_deg;
  bool ok;  ///< false when this run failed; numeric fields are NaN then
  double arrival_time;
  bool reached;
  double max_abs_dmc;
  double accumulated_risk;
};

/// Run the scenario once per threshold; runs execute concurrently and
/// per-run failures are recorded in their row without aborting the sweep.
inline std::vector<SweepRow> run_sweep(const Scenario& sc,
                                       const std::vector<double>& epsilons_deg) {
  if (epsilons_deg.empty()) {
    throw std::invalid_argument("sweep: empty threshold list");
  }
  std::vector<std::future<SweepRow>> futures;
  futures.reserve(epsilons_deg.size());
  for (const double eps_deg : epsilons_deg) {
    futures.push_back(std::async(std::launch::async, [&sc, eps_deg] {
      constexpr double nan = std::numeric_limits<double>::quiet_NaN();
      SweepRow row{eps_deg, false, nan, false, nan, nan};
      try {
        if (!(eps_deg >= 0.0 && eps_deg < 180.0)) {
          throw std::invalid_argument("epsilon_deg out of [0, 180)");
        }
        ControlConfig cfg = sc.control;
        cfg.epsilon = deg_to_rad(eps_deg);
        const TrajectoryRecord rec = simulate(sc, cfg);
        row.ok = true;
        row.arrival_time = rec.arrival_time;
        row.reached = rec.reached;
        row.max_abs_dmc = rec.max_abs_dmc;
        row.accumulated_risk = rec.accumulated_risk;
      } catch (const std::exception&) {
        row.ok = false;
      }
      return row;
    }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(futures.size());
  for (auto& f : futures) rows.push_back(f.get());
  return rows;
}

/// Sweep CSV: epsilon_deg,arrival_time,reached,max_dmc,accumulated_risk.
inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "epsilon_deg,arrival_time,reached,max_dmc,accumulated_risk\n";
  for (const auto& row : rows) {
    detail::append_number(out, row.epsilon_deg);
    out += ',';
    detail::append_number(out, row.arrival_time);
    out += ',';
    out += row.reached ? '1' : '0';
    out += ',';
    detail::append_number(out, row.max_abs_dmc);
    out += ',';
    detail::append_number(out, row.accumulated_risk);
    out += '\n';
  }
  return out;
}

}  // namespace dmc
