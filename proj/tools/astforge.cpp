#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "astforge/config.hpp"
#include "astforge/dissim.hpp"
#include "astforge/errors.hpp"
#include "astforge/harness.hpp"
#include "astforge/rss.hpp"
#include "astforge/text.hpp"
#include "astforge/trajectory.hpp"

namespace {

astforge::Trajectory read_trajectory_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw astforge::ConfigError("cannot open trajectory file: " + path);
  return astforge::read_trajectory(in);
}

// Resolves "car0" / "ped2" labels against a loaded trajectory.
int agent_index(const astforge::Trajectory& traj, const std::string& label) {
  for (int i = 0; i < traj.num_agents(); ++i) {
    if (astforge::agent_label(traj, i) == label) return i;
  }
  throw astforge::ConfigError("no agent named '" + label + "' in the trajectory");
}

int run_command(const std::string& config_path, const std::string& out_dir) {
  auto cfg = astforge::config::load_config(config_path);
  auto report = astforge::harness::run_experiment(cfg);
  for (const std::string& warning : report.warnings) {
    std::cerr << "warning: " << warning << '\n';
  }
  auto manifest = astforge::harness::export_report(report, cfg, out_dir);

  for (const auto& trial : report.trials) {
    std::cout << astforge::rewards::to_string(trial.mode) << " seed " << trial.seed << ": "
              << trial.failures_found << " failures in " << trial.episodes << " episodes, "
              << trial.failures.size() << " archived\n";
  }
  std::cout << "wrote " << manifest.size() << " files to " << out_dir << '\n';
  return 0;
}

int classify_command(const std::string& traj_path, const std::string& rss_path,
                     const std::string& car_label, const std::string& other_label,
                     const std::string& out_path) {
  auto traj = read_trajectory_file(traj_path);
  astforge::rss::RssParams params;
  if (!rss_path.empty()) params = astforge::config::load_rss_params(rss_path);

  int car = agent_index(traj, car_label);
  int other = agent_index(traj, other_label);
  if (out_path.empty()) {
    astforge::rss::write_classification(std::cout, traj, car, other, params);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw astforge::ConfigError("cannot open output file: " + out_path);
    astforge::rss::write_classification(out, traj, car, other, params);
  }
  return 0;
}

int dissim_command(const std::string& a_path, const std::string& b_path, int n,
                   const std::string& agents) {
  astforge::dissim::DissimConfig cfg;
  cfg.n_segments = n;
  if (agents == "lead") {
    cfg.agents = astforge::dissim::Agents::lead_car;
  } else if (agents == "all") {
    cfg.agents = astforge::dissim::Agents::all;
  } else {
    throw astforge::ConfigError("--agents must be lead or all");
  }
  auto a = read_trajectory_file(a_path);
  auto b = read_trajectory_file(b_path);
  std::cout << astforge::format_double(astforge::dissim::trajectory_dissimilarity(a, b, cfg))
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"falsification toolkit for a simulated crosswalk scenario"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "run the configured experiment and export reports");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--out", out_dir, "output directory")->required();

  std::string traj_path;
  std::string rss_path;
  std::string car_label = "car0";
  std::string other_label = "ped0";
  std::string classify_out;
  auto* classify =
      app.add_subcommand("classify", "label danger and per-step conduct for a trajectory");
  classify->add_option("--traj", traj_path, "trajectory csv")->required();
  classify->add_option("--rss-params", rss_path, "safe-distance parameter file");
  classify->add_option("--car", car_label, "car agent id (default car0)");
  classify->add_option("--other", other_label, "other agent id (default ped0)");
  classify->add_option("--out", classify_out, "output file (default stdout)");

  std::string a_path;
  std::string b_path;
  int n_segments = 10;
  std::string agents = "lead";
  auto* dissim = app.add_subcommand("dissim", "dissimilarity between two trajectories");
  dissim->add_option("--a", a_path, "first trajectory csv")->required();
  dissim->add_option("--b", b_path, "second trajectory csv")->required();
  dissim->add_option("--n", n_segments, "number of segments (default 10)");
  dissim->add_option("--agents", agents, "series to compare: lead or all");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return run_command(config_path, out_dir);
    if (classify->parsed()) return classify_command(traj_path, rss_path, car_label,
                                                    other_label, classify_out);
    if (dissim->parsed()) return dissim_command(a_path, b_path, n_segments, agents);
    return 0;
  } catch (const CLI::ParseError& e) {
    // Help/version exit cleanly; genuine usage mistakes are config errors.
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const astforge::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
