#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "astforge/dissim.hpp"
#include "astforge/rewards.hpp"
#include "astforge/rss.hpp"
#include "astforge/scenario.hpp"
#include "astforge/solver.hpp"

namespace astforge::config {

// Everything one run needs, as parsed from a `key = value` file.
struct ExperimentConfig {
  sim::ScenarioConfig scenario;
  rss::RssParams rss;
  rewards::RewardConfig reward;
  rewards::RewardMode mode = rewards::RewardMode::generic;
  dissim::DissimConfig dissim;
  search::SearchConfig search;

  // Failure attribution: minimum lead-car speed for a vehicle-induced label.
  double classify_speed_min = 0.5;

  // Optional sweeps. Absent keys fall back to the single (mode, seed) above;
  // keys present but empty mean "run nothing" on purpose.
  std::optional<std::vector<rewards::RewardMode>> modes;
  std::optional<std::vector<std::uint64_t>> seeds;

  std::vector<rewards::RewardMode> experiment_modes() const {
    return modes ? *modes : std::vector<rewards::RewardMode>{mode};
  }
  std::vector<std::uint64_t> experiment_seeds() const {
    return seeds ? *seeds : std::vector<std::uint64_t>{search.seed};
  }

  void validate() const;
};

// Accepted keys (see README for the full table): scenario fields (dt,
// horizon, crosswalk_x, ...), carN.* / pedN.* initial states, idm.*,
// thresholds.*, rss.*, reward.*, dissim.*, search.*, experiment.*, and
// classify.vehicle_speed_min. Unknown keys and malformed values raise
// ConfigError with the line number.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

// Standalone safe-distance parameter file for the classify command; accepts
// the same rss.* keys (the prefix is optional there).
rss::RssParams load_rss_params(const std::filesystem::path& path);

}  // namespace astforge::config
