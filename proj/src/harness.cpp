#include "astforge/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "astforge/errors.hpp"
#include "astforge/rss.hpp"
#include "astforge/solver.hpp"
#include "astforge/text.hpp"

namespace astforge::harness {

namespace {

constexpr std::array<FailureType, 3> kAllTypes = {
    FailureType::vehicle_induced, FailureType::pedestrian_induced, FailureType::veh_veh};

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps line endings stable
  if (!out) throw ConfigError("cannot open output file: " + path.string());
  return out;
}

std::string trial_tag(const TrialResult& trial) {
  return std::string(rewards::to_string(trial.mode)) + "_seed" + std::to_string(trial.seed);
}

}  // namespace

std::string_view to_string(FailureType type) {
  switch (type) {
    case FailureType::vehicle_induced: return "vehicle_induced";
    case FailureType::pedestrian_induced: return "pedestrian_induced";
    case FailureType::veh_veh: return "veh_veh";
    case FailureType::none: return "none";
  }
  return "unknown";
}

FailureType classify_failure(const Trajectory& traj, const sim::ScenarioConfig& cfg,
                             double vehicle_speed_min) {
  if (!traj.failure_flag || traj.failure_step < 0) {
    return FailureType::none;
  }
  const auto& snapshot = traj.states[traj.failure_step];

  for (int i = 0; i < traj.num_cars; ++i) {
    for (int j = i + 1; j < traj.num_cars; ++j) {
      if (std::abs(snapshot[i].x - snapshot[j].x) < cfg.thresholds.car_car) {
        return FailureType::veh_veh;
      }
    }
  }

  const AgentState& lead = snapshot[0];
  bool moving = lead.vx >= vehicle_speed_min;
  bool in_crossing = std::abs(lead.x - cfg.crosswalk_x) <= cfg.crosswalk_halfwidth;
  return moving && in_crossing ? FailureType::vehicle_induced
                               : FailureType::pedestrian_induced;
}

ExperimentReport run_experiment(const std::filesystem::path& config_path) {
  return run_experiment(config::load_config(config_path));
}

ExperimentReport run_experiment(const config::ExperimentConfig& cfg) {
  cfg.validate();

  ExperimentReport report;
  report.modes = cfg.experiment_modes();
  report.seeds = cfg.experiment_seeds();
  if (report.modes.empty() || report.seeds.empty()) {
    report.warnings.push_back("no (mode, seed) combinations configured; nothing was run");
    return report;
  }

  for (rewards::RewardMode mode : report.modes) {
    for (std::uint64_t seed : report.seeds) {
      search::SearchConfig sc = cfg.search;
      sc.seed = seed;
      auto result =
          search::run_search(cfg.scenario, mode, cfg.reward, cfg.rss, cfg.dissim, sc);

      TrialResult trial;
      trial.mode = mode;
      trial.seed = seed;
      trial.episodes = result.stats.episodes;
      trial.failures_found = result.stats.failures_found;
      for (Trajectory& traj : result.failures) {
        FailureRecord rec;
        rec.type = classify_failure(traj, cfg.scenario, cfg.classify_speed_min);
        rec.f_imp = rss::car_improper_fraction(traj, cfg.rss);
        rec.traj = std::move(traj);
        trial.failures.push_back(std::move(rec));
      }
      report.trials.push_back(std::move(trial));
    }
  }
  return report;
}

namespace {

// The pedestrian most plausibly involved: nearest to the lead car when the
// failure state was entered.
int failure_pedestrian(const Trajectory& traj) {
  const auto& snapshot = traj.states[traj.failure_step];
  const AgentState& lead = snapshot[0];
  int best = traj.num_cars;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int j = traj.num_cars; j < traj.num_agents(); ++j) {
    double d = std::hypot(snapshot[j].x - lead.x, snapshot[j].y - lead.y);
    if (d < best_dist) {
      best_dist = d;
      best = j;
    }
  }
  return best;
}

}  // namespace

std::vector<std::string> export_report(const ExperimentReport& report,
                                       const config::ExperimentConfig& cfg,
                                       const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> manifest;

  // Per-mode failure counts aggregated over seeds, zero rows included.
  std::map<rewards::RewardMode, std::array<long long, 3>> counts;
  std::map<rewards::RewardMode, std::array<long long, 10>> histogram;
  for (rewards::RewardMode mode : report.modes) {
    counts[mode] = {};
    histogram[mode] = {};
  }
  for (const TrialResult& trial : report.trials) {
    for (const FailureRecord& rec : trial.failures) {
      for (std::size_t i = 0; i < kAllTypes.size(); ++i) {
        if (kAllTypes[i] == rec.type) counts[trial.mode][i] += 1;
      }
      int bin = std::min(static_cast<int>(rec.f_imp * 10.0), 9);
      histogram[trial.mode][static_cast<std::size_t>(std::max(bin, 0))] += 1;
    }
  }

  {
    auto out = open_output(out_dir / "summary.csv");
    out << "failure_type";
    for (rewards::RewardMode mode : report.modes) out << ',' << rewards::to_string(mode);
    out << '\n';
    for (std::size_t i = 0; i < kAllTypes.size(); ++i) {
      out << to_string(kAllTypes[i]);
      for (rewards::RewardMode mode : report.modes) out << ',' << counts[mode][i];
      out << '\n';
    }
    manifest.push_back("summary.csv");
  }

  if (!report.trials.empty()) {
    auto out = open_output(out_dir / "fimp_histogram.csv");
    out << "bin_low,bin_high";
    for (rewards::RewardMode mode : report.modes) out << ',' << rewards::to_string(mode);
    out << '\n';
    for (int b = 0; b < 10; ++b) {
      out << format_double(b / 10.0) << ',' << format_double((b + 1) / 10.0);
      for (rewards::RewardMode mode : report.modes) out << ',' << histogram[mode][b];
      out << '\n';
    }
    manifest.push_back("fimp_histogram.csv");
  }

  for (const TrialResult& trial : report.trials) {
    const std::string tag = trial_tag(trial);
    const std::string archive_name = "archive_" + tag + ".csv";
    auto archive_out = open_output(out_dir / archive_name);
    archive_out << "rank,total_reward,failure_type,trajectory_file\n";
    for (std::size_t r = 0; r < trial.failures.size(); ++r) {
      const FailureRecord& rec = trial.failures[r];
      const std::string stem = tag + "_r" + std::to_string(r);
      const std::string traj_name = "traj_" + stem + ".csv";
      const std::string rss_name = "rss_" + stem + ".csv";
      archive_out << r << ',' << format_double(rec.traj.total_reward) << ','
                  << to_string(rec.type) << ',' << traj_name << '\n';
      auto traj_out = open_output(out_dir / traj_name);
      write_trajectory(traj_out, rec.traj);
      auto rss_out = open_output(out_dir / rss_name);
      rss::write_classification(rss_out, rec.traj, 0, failure_pedestrian(rec.traj), cfg.rss);
      manifest.push_back(traj_name);
      manifest.push_back(rss_name);
    }
    manifest.push_back(archive_name);
  }

  // The manifest indexes the data files; it does not list itself.
  std::sort(manifest.begin(), manifest.end());
  auto out = open_output(out_dir / "manifest.txt");
  for (const std::string& name : manifest) out << name << '\n';
  return manifest;
}

}  // namespace astforge::harness
