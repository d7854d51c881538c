#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "astforge/dissim.hpp"
#include "astforge/rewards.hpp"
#include "astforge/rss.hpp"
#include "astforge/scenario.hpp"
#include "astforge/trajectory.hpp"

namespace astforge::search {

struct SearchConfig {
  enum class Algo { mcts, random };

  Algo algo = Algo::mcts;
  long long budget = 1000;  // simulated episodes
  std::uint64_t seed = 0;
  double c_ucb = 1.41;    // exploration constant
  double c_pw = 1.0;      // progressive widening scale
  double alpha_pw = 0.5;  // progressive widening exponent

  void validate() const;  // throws ConfigError naming the offending field
};

// Open-loop tree node: stores statistics and child actions, never simulator
// states. Each iteration replays the action path from the root, which the
// deterministic simulator makes exact.
struct Node {
  std::int64_t visits = 0;
  double value_sum = 0.0;  // sum of total returns of episodes through here
  std::vector<std::pair<std::vector<EnvAction>, std::unique_ptr<Node>>> children;

  double mean_value() const {
    return visits > 0 ? value_sum / static_cast<double>(visits) : 0.0;
  }
};

// Child budget from double progressive widening: max(1, ceil(c * v^alpha)).
std::int64_t widening_cap(std::int64_t visits, double c_pw, double alpha_pw);

// Index of the UCB1-maximizing child; ties pick the earliest child, and an
// unvisited child always wins. Throws InterfaceError when there are none.
std::size_t ucb_best_child(const Node& node, double c_ucb);

// Uniform action draws addressed by (episode, depth, dimension) under a
// fixed (seed, stream) pair. The same address always yields the same action,
// independent of draw order, so two searches that share a seed sample
// identical actions at identical addresses regardless of reward mode.
struct ActionSampler {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  std::vector<EnvAction> sample(std::uint64_t episode, std::uint64_t depth,
                                int ped_count) const;
};

// Stream tags: tree search and the random baseline draw from disjoint key
// spaces; a third tag is reserved for stochastic tie-breaking should the
// selection rule ever need it (the current rule is deterministic).
inline constexpr std::uint64_t kMctsActionStream = 0x6d637473;
inline constexpr std::uint64_t kRandomActionStream = 0x726e6400;
inline constexpr std::uint64_t kTieBreakStream = 0x74696562;

struct SearchStats {
  long long episodes = 0;
  long long failures_found = 0;
  std::vector<double> episode_returns;  // one total return per episode
};

struct SearchResult {
  std::vector<Trajectory> failures;  // top-k by total reward, best first
  SearchStats stats;
};

class MctsSearch {
 public:
  MctsSearch(const sim::ScenarioConfig& scenario, rewards::RewardMode mode,
             const rewards::RewardConfig& reward_cfg, const rss::RssParams& rss_params,
             const dissim::DissimConfig& dissim_cfg, const SearchConfig& search_cfg);

  // Runs the full budget. When `archive` is null an internal archive with
  // capacity k is used; pass one to pre-seed or share it across runs.
  SearchResult run(dissim::FailureArchive* archive = nullptr);

  const Node& root() const { return root_; }

  // Test hook invoked after every episode with the tree path and its return.
  std::function<void(const std::vector<const Node*>&, double)> on_backprop;

 private:
  sim::ScenarioConfig scenario_;
  rewards::RewardMode mode_;
  rewards::RewardConfig reward_cfg_;
  rss::RssParams rss_params_;
  dissim::DissimConfig dissim_cfg_;
  SearchConfig search_cfg_;
  Node root_;
};

SearchResult random_search(const sim::ScenarioConfig& scenario, rewards::RewardMode mode,
                           const rewards::RewardConfig& reward_cfg,
                           const rss::RssParams& rss_params,
                           const dissim::DissimConfig& dissim_cfg,
                           const SearchConfig& search_cfg,
                           dissim::FailureArchive* archive = nullptr);

// Dispatches on search_cfg.algo.
SearchResult run_search(const sim::ScenarioConfig& scenario, rewards::RewardMode mode,
                        const rewards::RewardConfig& reward_cfg,
                        const rss::RssParams& rss_params,
                        const dissim::DissimConfig& dissim_cfg, const SearchConfig& search_cfg,
                        dissim::FailureArchive* archive = nullptr);

}  // namespace astforge::search
