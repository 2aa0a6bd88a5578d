// Command-line front end: scenario simulation, |cue| field maps, and
// threshold sweeps. Exit codes: 0 success, 1 validation error, 2 runtime
// failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dmc/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

struct SimulateArgs {
  std::string scenario_path;
  std::string out_dir;
  long long seed = -1;
};

void do_simulate(const SimulateArgs& args) {
  dmc::Scenario sc = dmc::load_scenario(read_file(args.scenario_path));
  if (args.seed >= 0 && sc.control.mpc) {
    sc.control.mpc->seed = static_cast<std::uint32_t>(args.seed);
  }
  const dmc::TrajectoryRecord rec = dmc::simulate(sc, sc.control);

  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  const std::string traj_path = (fs::path(args.out_dir) / "trajectory.csv").string();
  const std::string metrics_path = (fs::path(args.out_dir) / "metrics.json").string();
  write_file(traj_path, dmc::trajectory_csv(rec));
  write_file(metrics_path, dmc::metrics_json(rec, sc).dump(2) + "\n");

  std::cout << "rows: " << rec.rows.size() << "\n"
            << "reached: " << (rec.reached ? "yes" : "no") << "\n"
            << "captured: " << (rec.captured ? "yes" : "no") << "\n";
  if (rec.reached) {
    std::cout << "arrival_time: " << rec.arrival_time << "\n";
  }
  std::cout << "wrote " << traj_path << "\n"
            << "wrote " << metrics_path << "\n";
}

struct FieldmapArgs {
  std::string scenario_path;
  std::string out_path;
  double heading_deg = 0.0;
  dmc::FieldGrid grid{};
  std::string mode = "penetration";
};

void do_fieldmap(const FieldmapArgs& args) {
  const dmc::Scenario sc = dmc::load_scenario(read_file(args.scenario_path));
  const dmc::CueVariant mode = args.mode == "stayout"
                                   ? dmc::CueVariant::Stayout
                                   : dmc::CueVariant::Penetration;
  const dmc::FieldMap fm = dmc::compute_fieldmap(
      sc, dmc::deg_to_rad(args.heading_deg), args.grid, mode);
  write_file(args.out_path, dmc::fieldmap_csv(fm));
  std::cout << "wrote " << args.out_path << " (" << args.grid.nx << "x"
            << args.grid.ny << " cells)\n";
}

struct SweepArgs {
  std::string scenario_path;
  std::string out_path;
  std::vector<double> epsilons_deg;
};

void do_sweep(const SweepArgs& args) {
  const dmc::Scenario sc = dmc::load_scenario(read_file(args.scenario_path));
  const std::vector<dmc::SweepRow> rows = dmc::run_sweep(sc, args.epsilons_deg);
  write_file(args.out_path, dmc::sweep_csv(rows));
  std::cout << "wrote " << args.out_path << " (" << rows.size() << " rows)\n";
  for (const auto& row : rows) {
    if (!row.ok) {
      std::cerr << "warning: run at epsilon_deg=" << row.epsilon_deg
                << " failed\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Engagement-zone avoidance: simulation, field maps, sweeps"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "Run a scenario to completion");
  sim->add_option("--scenario", sim_args.scenario_path, "Scenario JSON file")
      ->required();
  sim->add_option("--out", sim_args.out_dir,
                  "Output directory for trajectory.csv and metrics.json")
      ->required();
  sim->add_option("--seed", sim_args.seed, "Override the MPC restart seed");
  sim->callback([&] { do_simulate(sim_args); });

  FieldmapArgs fm_args;
  CLI::App* fm = app.add_subcommand("fieldmap",
                                    "Sample |DMC| on a grid for a fixed heading");
  fm->add_option("--scenario", fm_args.scenario_path, "Scenario JSON file")
      ->required();
  fm->add_option("--heading-deg", fm_args.heading_deg, "Fixed agent heading")
      ->required();
  fm->add_option("--xmin", fm_args.grid.xmin)->required();
  fm->add_option("--xmax", fm_args.grid.xmax)->required();
  fm->add_option("--ymin", fm_args.grid.ymin)->required();
  fm->add_option("--ymax", fm_args.grid.ymax)->required();
  fm->add_option("--nx", fm_args.grid.nx)->required();
  fm->add_option("--ny", fm_args.grid.ny)->required();
  fm->add_option("--out", fm_args.out_path, "Output CSV path")->required();
  fm->add_option("--mode", fm_args.mode, "penetration|stayout")
      ->check(CLI::IsMember({"penetration", "stayout"}));
  fm->callback([&] { do_fieldmap(fm_args); });

  SweepArgs sweep_args;
  CLI::App* sw = app.add_subcommand("sweep", "Run once per DMC threshold");
  sw->add_option("--scenario", sweep_args.scenario_path, "Scenario JSON file")
      ->required();
  sw->add_option("--epsilons-deg", sweep_args.epsilons_deg,
                 "Comma-separated thresholds in degrees")
      ->required()
      ->delimiter(',');
  sw->add_option("--out", sweep_args.out_path, "Output CSV path")->required();
  sw->callback([&] { do_sweep(sweep_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
