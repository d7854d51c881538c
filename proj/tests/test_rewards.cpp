#include <doctest.h>

#include <cmath>
#include <vector>

#include "astforge/errors.hpp"
#include "astforge/rewards.hpp"

using namespace astforge;
using namespace astforge::rewards;

namespace {

// Car at constant speed with a pedestrian pinned 1 m ahead that starts inside
// the lateral envelope (|dy| = 0.1 < 0.2551) and drifts out of it by t = 4.
// Under longitudinal rules the cruising car is improper for t = 1..3.
Trajectory cruising_episode(int count, bool failed) {
  Trajectory traj;
  std::vector<EnvAction> acts(1);
  auto state_at = [](int t) {
    double x = 5.0 * 0.1 * t;
    return std::vector<AgentState>{{5.0, 0.0, x, 0.0}, {0.0, 0.5, x + 1.0, 0.1 + 0.05 * t}};
  };
  traj.reset(state_at(0), false, 0.1, 1);
  for (int t = 1; t < count; ++t) {
    bool last = t == count - 1;
    traj.push_transition(acts, std::vector<Point2>(2), state_at(t), failed && last);
    traj.add_reward(0.0);
  }
  return traj;
}

StepContext make_ctx(bool in_E, int t, int horizon, std::span<const EnvAction> action,
                     double miss = 0.0, const Trajectory* episode = nullptr) {
  StepContext ctx;
  ctx.in_E = in_E;
  ctx.t = t;
  ctx.horizon = horizon;
  ctx.action = action;
  ctx.miss_distance = miss;
  ctx.episode = episode;
  return ctx;
}

}  // namespace

TEST_CASE("mahalanobis distance of raw vectors") {
  std::vector<double> mu = {0.0, 0.0, 0.0};
  std::vector<double> sigma = {0.5, 0.5, 0.5};

  SUBCASE("a unit step along one axis with sigma 0.5 scores 2") {
    std::vector<double> value = {1.0, 0.0, 0.0};
    CHECK(mahalanobis(value, mu, sigma) == 2.0);
  }
  SUBCASE("the mean scores zero") {
    std::vector<double> value = {0.0, 0.0, 0.0};
    CHECK(mahalanobis(value, mu, sigma) == 0.0);
  }
  SUBCASE("dimension mismatches are interface errors") {
    std::vector<double> value = {1.0, 0.0};
    CHECK_THROWS_AS(mahalanobis(value, mu, sigma), InterfaceError);
  }
}

TEST_CASE("mahalanobis distance of pedestrian actions") {
  ActionModel model;  // sigma_accel 0.5, sigma_noise 0.3, zero means

  SUBCASE("zero action costs nothing") {
    std::vector<EnvAction> acts(2);
    CHECK(mahalanobis(acts, model) == 0.0);
  }
  SUBCASE("one accel z and one noise z combine in quadrature") {
    std::vector<EnvAction> acts(1);
    acts[0].ax = 0.5;  // z = 1
    acts[0].ny = 0.3;  // z = 1
    CHECK(mahalanobis(acts, model) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("two pedestrians accumulate over 12 dimensions") {
    std::vector<EnvAction> acts(2);
    acts[0].ax = 0.5;
    acts[1].ax = 0.5;
    CHECK(mahalanobis(acts, model) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("generic reward branches") {
  RewardConfig cfg;  // alpha 1e4, beta 1e3
  std::vector<EnvAction> acts(1);
  acts[0].ax = 1.0;  // Mahalanobis 2

  SUBCASE("reaching the failure set is free") {
    CHECK(generic_reward(make_ctx(true, 12, 50, acts, 3.0), cfg) == 0.0);
  }
  SUBCASE("running out the horizon costs alpha plus beta times the miss") {
    CHECK(generic_reward(make_ctx(false, 50, 50, acts, 5.0), cfg) == -15000.0);
    CHECK(generic_reward(make_ctx(false, 50, 50, acts, 0.0), cfg) == -10000.0);
  }
  SUBCASE("mid-episode steps pay the action cost") {
    CHECK(generic_reward(make_ctx(false, 12, 50, acts, 5.0), cfg) == doctest::Approx(-2.0));
  }
}

TEST_CASE("rss reward branches") {
  RewardConfig cfg;  // f_crit 0.1
  std::vector<EnvAction> acts(1);
  acts[0].ay = 1.0;  // Mahalanobis 2

  SUBCASE("an at-fault crash is free") {
    CHECK(rss_reward_from_fraction(make_ctx(true, 20, 50, acts), 0.25, cfg) == 0.0);
  }
  SUBCASE("a blameless crash mid-episode only pays the action cost") {
    // Not at fault means not in the at-fault failure set, so the episode is
    // not terminal and the step is priced like any other.
    CHECK(rss_reward_from_fraction(make_ctx(true, 20, 50, acts), 0.05, cfg) ==
          doctest::Approx(-2.0));
  }
  SUBCASE("exactly critical conduct is still blameless") {
    CHECK(rss_reward_from_fraction(make_ctx(true, 50, 50, acts), cfg.f_crit, cfg) == -10100.0);
  }
  SUBCASE("horizon end is graded by the induced improper fraction") {
    CHECK(rss_reward_from_fraction(make_ctx(false, 50, 50, acts), 0.25, cfg) == -10250.0);
    CHECK(rss_reward_from_fraction(make_ctx(false, 50, 50, acts), 0.0, cfg) == -10000.0);
  }
  SUBCASE("mid-episode steps pay the action cost") {
    CHECK(rss_reward_from_fraction(make_ctx(false, 10, 50, acts), 0.9, cfg) ==
          doctest::Approx(-2.0));
  }
  SUBCASE("label-based wrapper matches the fraction form") {
    std::vector<rss::ResponseLabel> labels(4, rss::ResponseLabel::improper);
    labels[0] = rss::ResponseLabel::proper;  // fraction 0.75
    CHECK(rss_reward(make_ctx(true, 20, 50, acts), labels, cfg) == 0.0);
    CHECK(in_E_RSS(cruising_episode(5, true), labels, cfg));
    CHECK_FALSE(in_E_RSS(cruising_episode(5, false), labels, cfg));
    std::vector<rss::ResponseLabel> calm(40, rss::ResponseLabel::not_applicable);
    CHECK_FALSE(in_E_RSS(cruising_episode(5, true), calm, cfg));
  }
}

TEST_CASE("trajectory-dissimilarity reward branches") {
  RewardConfig cfg;
  dissim::DissimConfig dc;
  dc.n_segments = 2;
  std::vector<EnvAction> acts(1);
  acts[0].ax = 1.0;

  dissim::FailureArchive archive(5);
  Trajectory probe = cruising_episode(6, true);

  SUBCASE("failure against an empty archive earns exactly zero") {
    CHECK(td_reward(make_ctx(true, 5, 50, acts, 0.0, &probe), archive, cfg, dc) == 0.0);
  }
  SUBCASE("failure earns gamma times the mean archive dissimilarity") {
    Trajectory archived = cruising_episode(6, true);
    for (auto& states : archived.states) {
      for (auto& agent : states) agent.y += 3.0;  // rigid shift: dissimilarity 3
    }
    archive.insert(archived);
    double reward = td_reward(make_ctx(true, 5, 50, acts, 0.0, &probe), archive, cfg, dc);
    CHECK(reward == doctest::Approx(3.0));

    cfg.gamma = 2.5;
    reward = td_reward(make_ctx(true, 5, 50, acts, 0.0, &probe), archive, cfg, dc);
    CHECK(reward == doctest::Approx(7.5));
  }
  SUBCASE("horizon and mid-episode branches match the generic shape") {
    CHECK(td_reward(make_ctx(false, 50, 50, acts, 5.0, &probe), archive, cfg, dc) == -15000.0);
    CHECK(td_reward(make_ctx(false, 10, 50, acts, 5.0, &probe), archive, cfg, dc) ==
          doctest::Approx(-2.0));
  }
  SUBCASE("a failure context without the episode is an interface error") {
    CHECK_THROWS_AS(td_reward(make_ctx(true, 5, 50, acts), archive, cfg, dc), InterfaceError);
  }
}

TEST_CASE("reward config validation names the offending field") {
  auto expect_throw = [](RewardConfig cfg) { CHECK_THROWS_AS(cfg.validate(), ConfigError); };
  RewardConfig cfg;
  cfg.validate();  // defaults are fine

  cfg.alpha = -1.0;
  expect_throw(cfg);
  cfg = RewardConfig{};
  cfg.f_crit = 1.5;
  expect_throw(cfg);
  cfg = RewardConfig{};
  cfg.k = 0;
  expect_throw(cfg);
  cfg = RewardConfig{};
  cfg.action_model.sigma_noise = 0.0;
  expect_throw(cfg);
}

TEST_CASE("reward evaluator dispatch") {
  RewardConfig cfg;
  rss::RssParams rp;
  dissim::DissimConfig dc;
  std::vector<EnvAction> acts(1);
  acts[0].ax = 1.0;

  SUBCASE("generic mode counts any failure as success") {
    RewardEvaluator eval(RewardMode::generic, cfg, rp, dc);
    auto res = eval.evaluate(make_ctx(true, 10, 50, acts), nullptr);
    CHECK(res.reward == 0.0);
    CHECK(res.success);
    res = eval.evaluate(make_ctx(false, 10, 50, acts), nullptr);
    CHECK(res.reward == doctest::Approx(-2.0));
    CHECK_FALSE(res.success);

    CHECK(eval.is_failure(cruising_episode(11, true)));
    CHECK_FALSE(eval.is_failure(cruising_episode(11, false)));
  }

  SUBCASE("rss mode requires fault for success") {
    RewardEvaluator eval(RewardMode::rss, cfg, rp, dc);

    // The cruising episode is improper for 3 of 10 steps: f = 0.3 > 0.1.
    Trajectory at_fault = cruising_episode(11, true);
    auto res = eval.evaluate(make_ctx(true, 10, 50, acts, 0.0, &at_fault), nullptr);
    CHECK(res.reward == 0.0);
    CHECK(res.success);
    CHECK(eval.is_failure(at_fault));

    // Fault can mature after the collision: the event sticks to the episode
    // even when the current state has left the critical set.
    res = eval.evaluate(make_ctx(false, 10, 50, acts, 0.0, &at_fault), nullptr);
    CHECK(res.reward == 0.0);
    CHECK(res.success);

    // A crash the car cannot be blamed for: pedestrian never dangerous. The
    // episode is not over; the step costs its action price.
    Trajectory blameless = cruising_episode(11, true);
    for (auto& states : blameless.states) states[1].y += 100.0;
    res = eval.evaluate(make_ctx(true, 10, 50, acts, 0.0, &blameless), nullptr);
    CHECK(res.reward == doctest::Approx(-2.0));
    CHECK_FALSE(res.success);
    CHECK_FALSE(eval.is_failure(blameless));

    // Mid-episode steps skip the conduct classification entirely.
    res = eval.evaluate(make_ctx(false, 10, 50, acts), nullptr);
    CHECK(res.reward == doctest::Approx(-2.0));
    CHECK_FALSE(res.success);

    // Episode end without the episode in context is an interface error.
    CHECK_THROWS_AS(eval.evaluate(make_ctx(true, 10, 50, acts), nullptr), InterfaceError);
  }

  SUBCASE("td mode needs the archive") {
    RewardEvaluator eval(RewardMode::td, cfg, rp, dc);
    Trajectory probe = cruising_episode(6, true);
    dissim::FailureArchive archive(5);
    auto res = eval.evaluate(make_ctx(true, 5, 50, acts, 0.0, &probe), &archive);
    CHECK(res.reward == 0.0);
    CHECK(res.success);
    CHECK_THROWS_AS(eval.evaluate(make_ctx(true, 5, 50, acts, 0.0, &probe), nullptr),
                    InterfaceError);
  }

  SUBCASE("constructor validates both parameter sets") {
    RewardConfig bad = cfg;
    bad.beta = -1.0;
    CHECK_THROWS_AS(RewardEvaluator(RewardMode::generic, bad, rp, dc), ConfigError);
    rss::RssParams bad_rss = rp;
    bad_rss.lon_a_min_brk = 0.0;
    CHECK_THROWS_AS(RewardEvaluator(RewardMode::generic, cfg, bad_rss, dc), ConfigError);
  }
}
