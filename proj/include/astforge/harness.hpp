#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "astforge/config.hpp"
#include "astforge/trajectory.hpp"

namespace astforge::harness {

enum class FailureType { vehicle_induced, pedestrian_induced, veh_veh, none };

std::string_view to_string(FailureType type);

// Attribution of a failure episode, judged at the first failure state:
//  - any two cars within the car/car threshold -> veh_veh;
//  - otherwise vehicle_induced when the lead car is still moving at least
//    at `vehicle_speed_min` inside the crossing band, pedestrian_induced
//    when it had effectively yielded (stopped, crawling, or past the band).
// A trajectory that is not a failure episode classifies as none.
FailureType classify_failure(const Trajectory& traj, const sim::ScenarioConfig& cfg,
                             double vehicle_speed_min);

struct FailureRecord {
  Trajectory traj;
  FailureType type = FailureType::pedestrian_induced;
  double f_imp = 0.0;  // improper fraction of the lead car over the episode
};

struct TrialResult {
  rewards::RewardMode mode = rewards::RewardMode::generic;
  std::uint64_t seed = 0;
  long long episodes = 0;
  long long failures_found = 0;
  std::vector<FailureRecord> failures;  // archive order: best total reward first
};

struct ExperimentReport {
  std::vector<rewards::RewardMode> modes;
  std::vector<std::uint64_t> seeds;
  std::vector<TrialResult> trials;  // modes x seeds, seed-major within a mode
  std::vector<std::string> warnings;
};

ExperimentReport run_experiment(const config::ExperimentConfig& cfg);
ExperimentReport run_experiment(const std::filesystem::path& config_path);

// Writes summary.csv (failure counts by type and mode), fimp_histogram.csv
// (10 uniform bins over [0, 1], per mode; only when at least one trial ran),
// and per trial an archive_<mode>_seed<seed>.csv whose rows reference a
// traj_..._r<rank>.csv trajectory plus an rss_..._r<rank>.csv per-step
// classification (lead car against the pedestrian nearest at the failure).
// manifest.txt indexes every data file, sorted; the same list is returned.
std::vector<std::string> export_report(const ExperimentReport& report,
                                       const config::ExperimentConfig& cfg,
                                       const std::filesystem::path& out_dir);

}  // namespace astforge::harness
