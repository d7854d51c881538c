#include "astforge/solver.hpp"

#include <cmath>
#include <limits>

#include "astforge/errors.hpp"
#include "astforge/random.hpp"

namespace astforge::search {

void SearchConfig::validate() const {
  if (budget < 1) throw ConfigError("search config: budget must be at least 1");
  if (c_ucb < 0.0) throw ConfigError("search config: c_ucb must be non-negative");
  if (c_pw <= 0.0) throw ConfigError("search config: c_pw must be positive");
  if (alpha_pw < 0.0 || alpha_pw > 1.0) {
    throw ConfigError("search config: alpha_pw must be in [0, 1]");
  }
}

std::int64_t widening_cap(std::int64_t visits, double c_pw, double alpha_pw) {
  double cap = std::ceil(c_pw * std::pow(static_cast<double>(visits), alpha_pw));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(cap));
}

std::size_t ucb_best_child(const Node& node, double c_ucb) {
  if (node.children.empty()) throw InterfaceError("ucb_best_child: node has no children");
  double log_n = std::log(static_cast<double>(std::max<std::int64_t>(node.visits, 1)));
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const Node& child = *node.children[i].second;
    double score =
        child.visits == 0
            ? std::numeric_limits<double>::infinity()
            : child.mean_value() + c_ucb * std::sqrt(log_n / static_cast<double>(child.visits));
    if (score > best_score) {  // strict: ties keep the earliest child
      best_score = score;
      best = i;
    }
  }
  return best;
}

std::vector<EnvAction> ActionSampler::sample(std::uint64_t episode, std::uint64_t depth,
                                             int ped_count) const {
  if (ped_count < 1) throw InterfaceError("ActionSampler: ped_count must be at least 1");
  std::uint64_t base = rng::mix(rng::mix(rng::mix(seed, stream), episode), depth);
  std::vector<EnvAction> actions(static_cast<std::size_t>(ped_count));
  std::uint64_t dim = 0;
  for (EnvAction& a : actions) {
    a.ax = rng::uniform(rng::mix(base, dim++), -1.0, 1.0);
    a.ay = rng::uniform(rng::mix(base, dim++), -1.0, 1.0);
    a.nvx = rng::uniform(rng::mix(base, dim++), 0.0, 1.0);
    a.nvy = rng::uniform(rng::mix(base, dim++), 0.0, 1.0);
    a.nx = rng::uniform(rng::mix(base, dim++), 0.0, 1.0);
    a.ny = rng::uniform(rng::mix(base, dim++), 0.0, 1.0);
  }
  return actions;
}

namespace {

double min_ped_distance(const sim::SimState& state, const sim::ScenarioConfig& cfg) {
  const AgentState& lead = state.agents[0];
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < cfg.num_peds(); ++j) {
    const AgentState& p = state.agents[cfg.num_cars() + j];
    best = std::min(best, std::hypot(p.x - lead.x, p.y - lead.y));
  }
  return best;
}

// Drives one episode: owns the simulator state, records the trajectory, and
// scores every transition through the mode's evaluator.
class EpisodeRunner {
 public:
  EpisodeRunner(const sim::ScenarioConfig& scenario, const rewards::RewardEvaluator& eval,
                const dissim::FailureArchive* archive)
      : scenario_(scenario), eval_(eval), archive_(archive) {}

  void begin(std::uint64_t sim_seed) {
    state_ = sim::initialize(scenario_, sim_seed);
    bool event0 = sim::in_critical_set(state_, scenario_);
    traj_.reset(state_.agents, event0, scenario_.dt, scenario_.num_cars());
    // Terminal means terminal for this mode: under rss rewards a blameless
    // collision keeps the episode alive until fault or the horizon.
    done_ = eval_.is_failure(traj_) || state_.time_step >= scenario_.horizon;
  }

  bool done() const { return done_; }
  int depth() const { return state_.time_step; }
  const Trajectory& trajectory() const { return traj_; }

  double apply(const std::vector<EnvAction>& actions) {
    bool in_E = sim::step(state_, actions, scenario_, &accel_);
    traj_.push_transition(actions, std::move(accel_), state_.agents, in_E);

    rewards::StepContext ctx;
    ctx.in_E = in_E;
    ctx.t = state_.time_step;
    ctx.horizon = scenario_.horizon;
    ctx.action = traj_.actions.back();
    ctx.miss_distance = min_ped_distance(state_, scenario_);
    ctx.episode = &traj_;
    auto res = eval_.evaluate(ctx, archive_);
    traj_.add_reward(res.reward);

    done_ = res.success || state_.time_step >= scenario_.horizon;
    return res.reward;
  }

 private:
  sim::ScenarioConfig scenario_;
  const rewards::RewardEvaluator& eval_;
  const dissim::FailureArchive* archive_;
  sim::SimState state_;
  Trajectory traj_;
  std::vector<Point2> accel_;
  bool done_ = false;
};

void finish_episode(const EpisodeRunner& runner, const rewards::RewardEvaluator& eval,
                    dissim::FailureArchive& archive, SearchStats& stats) {
  stats.episodes += 1;
  stats.episode_returns.push_back(runner.trajectory().total_reward);
  if (eval.is_failure(runner.trajectory())) {
    stats.failures_found += 1;
    archive.insert(runner.trajectory());
  }
}

}  // namespace

MctsSearch::MctsSearch(const sim::ScenarioConfig& scenario, rewards::RewardMode mode,
                       const rewards::RewardConfig& reward_cfg,
                       const rss::RssParams& rss_params, const dissim::DissimConfig& dissim_cfg,
                       const SearchConfig& search_cfg)
    : scenario_(scenario),
      mode_(mode),
      reward_cfg_(reward_cfg),
      rss_params_(rss_params),
      dissim_cfg_(dissim_cfg),
      search_cfg_(search_cfg) {
  scenario_.validate();
  search_cfg_.validate();
}

SearchResult MctsSearch::run(dissim::FailureArchive* archive) {
  dissim::FailureArchive local(reward_cfg_.k);
  dissim::FailureArchive& store = archive ? *archive : local;

  rewards::RewardEvaluator eval(mode_, reward_cfg_, rss_params_, dissim_cfg_);
  EpisodeRunner runner(scenario_, eval, &store);
  ActionSampler sampler{search_cfg_.seed, kMctsActionStream};
  const int peds = scenario_.num_peds();

  root_ = Node{};
  SearchResult out;
  std::vector<Node*> path;

  for (long long it = 0; it < search_cfg_.budget; ++it) {
    runner.begin(search_cfg_.seed);
    path.clear();
    path.push_back(&root_);
    Node* node = &root_;

    while (!runner.done()) {
      std::int64_t cap = widening_cap(node->visits, search_cfg_.c_pw, search_cfg_.alpha_pw);
      if (static_cast<std::int64_t>(node->children.size()) < cap) {
        // Widen: sample a fresh action, then finish with a random rollout.
        auto actions =
            sampler.sample(static_cast<std::uint64_t>(it), runner.depth(), peds);
        node->children.emplace_back(std::move(actions), std::make_unique<Node>());
        Node* child = node->children.back().second.get();
        runner.apply(node->children.back().first);
        path.push_back(child);
        while (!runner.done()) {
          runner.apply(sampler.sample(static_cast<std::uint64_t>(it), runner.depth(), peds));
        }
        break;
      }
      std::size_t idx = ucb_best_child(*node, search_cfg_.c_ucb);
      runner.apply(node->children[idx].first);
      node = node->children[idx].second.get();
      path.push_back(node);
    }

    double episode_return = runner.trajectory().total_reward;
    for (Node* n : path) {
      n->visits += 1;
      n->value_sum += episode_return;
    }
    if (on_backprop) {
      std::vector<const Node*> view(path.begin(), path.end());
      on_backprop(view, episode_return);
    }
    finish_episode(runner, eval, store, out.stats);
  }

  out.failures = store.entries();
  return out;
}

SearchResult random_search(const sim::ScenarioConfig& scenario, rewards::RewardMode mode,
                           const rewards::RewardConfig& reward_cfg,
                           const rss::RssParams& rss_params,
                           const dissim::DissimConfig& dissim_cfg,
                           const SearchConfig& search_cfg, dissim::FailureArchive* archive) {
  sim::ScenarioConfig cfg = scenario;
  cfg.validate();
  search_cfg.validate();

  dissim::FailureArchive local(reward_cfg.k);
  dissim::FailureArchive& store = archive ? *archive : local;

  rewards::RewardEvaluator eval(mode, reward_cfg, rss_params, dissim_cfg);
  EpisodeRunner runner(cfg, eval, &store);
  ActionSampler sampler{search_cfg.seed, kRandomActionStream};
  const int peds = cfg.num_peds();

  SearchResult out;
  for (long long it = 0; it < search_cfg.budget; ++it) {
    runner.begin(search_cfg.seed);
    while (!runner.done()) {
      runner.apply(sampler.sample(static_cast<std::uint64_t>(it), runner.depth(), peds));
    }
    finish_episode(runner, eval, store, out.stats);
  }
  out.failures = store.entries();
  return out;
}

SearchResult run_search(const sim::ScenarioConfig& scenario, rewards::RewardMode mode,
                        const rewards::RewardConfig& reward_cfg,
                        const rss::RssParams& rss_params,
                        const dissim::DissimConfig& dissim_cfg, const SearchConfig& search_cfg,
                        dissim::FailureArchive* archive) {
  if (search_cfg.algo == SearchConfig::Algo::random) {
    return random_search(scenario, mode, reward_cfg, rss_params, dissim_cfg, search_cfg,
                         archive);
  }
  MctsSearch search(scenario, mode, reward_cfg, rss_params, dissim_cfg, search_cfg);
  return search.run(archive);
}

}  // namespace astforge::search
