#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "astforge/dissim.hpp"
#include "astforge/rss.hpp"
#include "astforge/trajectory.hpp"
#include "astforge/types.hpp"

namespace astforge::rewards {

// Diagonal Gaussian over the 6 disturbance dimensions of each pedestrian;
// the Mahalanobis distance of an action doubles as its per-step cost.
struct ActionModel {
  double mu_accel = 0.0;
  double mu_noise = 0.0;
  double sigma_accel = 0.5;
  double sigma_noise = 0.3;
};

enum class RewardMode { generic, rss, td };

std::string_view to_string(RewardMode mode);

struct RewardConfig {
  double alpha = 1e4;   // horizon-miss penalty scale
  double beta = 1e3;    // distance / fault weighting in the miss penalty
  double gamma = 1.0;   // dissimilarity bonus scale
  double f_crit = 0.1;  // improper-fraction threshold for at-fault failures
  int k = 25;           // archive capacity / comparison count
  ActionModel action_model;

  void validate() const;  // throws ConfigError naming the offending field
};

// Everything a per-transition reward depends on. `t` is the index of the
// state the transition produced; `episode` is the trajectory so far and
// must already include that state.
struct StepContext {
  bool in_E = false;
  int t = 0;
  int horizon = 0;
  std::span<const EnvAction> action;
  double miss_distance = 0.0;  // lead car to nearest pedestrian at the final state
  const Trajectory* episode = nullptr;
};

double mahalanobis(std::span<const double> value, std::span<const double> mu,
                   std::span<const double> sigma);

// Flattens per-pedestrian actions against the broadcast action model.
double mahalanobis(std::span<const EnvAction> actions, const ActionModel& model);

// Failure 0, horizon -alpha - beta * miss, otherwise -Mahalanobis cost.
double generic_reward(const StepContext& ctx, const RewardConfig& cfg);

// Failure episodes where the improper fraction exceeds f_crit.
bool in_E_RSS(const Trajectory& traj, std::span<const rss::ResponseLabel> labels,
              const RewardConfig& cfg);

// At-fault failure 0; reaching the horizon without fault costs
// -alpha - beta * improper_fraction; every other step, a collision without
// fault included, costs the action price. A blameless collision is not
// terminal under this mode: the episode runs on, and it only becomes an
// at-fault failure if the improper fraction later clears f_crit.
double rss_reward(const StepContext& ctx, std::span<const rss::ResponseLabel> labels,
                  const RewardConfig& cfg);
double rss_reward_from_fraction(const StepContext& ctx, double improper_fraction,
                                const RewardConfig& cfg);

// Failure earns gamma times the mean dissimilarity to the archive as a
// bonus; the other branches match the generic shape.
double td_reward(const StepContext& ctx, const dissim::FailureArchive& archive,
                 const RewardConfig& cfg, const dissim::DissimConfig& dc);

// Mode dispatch used by the search: one reward per transition plus the
// decision whether the episode ended as a success (a countable failure).
class RewardEvaluator {
 public:
  RewardEvaluator(RewardMode mode, const RewardConfig& cfg, const rss::RssParams& rss_params,
                  const dissim::DissimConfig& dc);

  struct StepResult {
    double reward = 0.0;
    bool success = false;  // terminal failure condition for this mode
  };

  // `archive` may be null outside td mode.
  StepResult evaluate(const StepContext& ctx, const dissim::FailureArchive* archive) const;

  // Is a completed episode a failure in this mode's sense (E vs. at-fault E)?
  bool is_failure(const Trajectory& traj) const;

  RewardMode mode() const { return mode_; }
  const RewardConfig& config() const { return cfg_; }

 private:
  RewardMode mode_;
  RewardConfig cfg_;
  rss::RssParams rss_params_;
  dissim::DissimConfig dissim_cfg_;
};

}  // namespace astforge::rewards
