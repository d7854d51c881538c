#include <doctest.h>

#include <cmath>
#include <vector>

#include "astforge/errors.hpp"
#include "astforge/scenario.hpp"
#include "fixtures.hpp"

using namespace astforge;
using namespace astforge::sim;
using astforge::testing::one_car_config;
using astforge::testing::two_car_config;

namespace {

std::vector<EnvAction> no_op(int peds) { return std::vector<EnvAction>(peds); }

}  // namespace

TEST_CASE("initialize lays out cars then pedestrians with the configured states") {
  auto cfg = two_car_config();
  auto s = initialize(cfg, 7);
  REQUIRE(s.agents.size() == 4);
  CHECK(s.time_step == 0);
  CHECK(s.agents[0] == AgentState{11.1, 0.0, -20.0, 0.0});
  CHECK(s.agents[1] == AgentState{12.5, 0.0, -37.0, 0.0});
  CHECK(s.agents[2] == AgentState{0.0, 0.5, 0.0, -3.0});
  CHECK(s.agents[3] == AgentState{0.0, -0.5, 0.0, 3.0});
}

TEST_CASE("config validation names the offending field") {
  auto cfg = two_car_config();
  cfg.dt = 0.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("dt"), ConfigError);

  cfg = two_car_config();
  cfg.ped_inits.clear();
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("ped_inits"), ConfigError);

  cfg = two_car_config();
  cfg.horizon = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("horizon"), ConfigError);
}

TEST_CASE("pedestrian integration is semi-implicit with dt 0.1") {
  auto cfg = one_car_config();
  cfg.ped_inits = {{0.0, 0.0, 0.0, -3.0}};  // at rest
  cfg.car_inits = {{0.0, 0.0, -1000.0, 0.0}};
  auto s = initialize(cfg, 0);

  std::vector<EnvAction> acts(1);
  acts[0].ay = 0.5;
  step(s, acts, cfg);

  // Velocity updates first, then position uses the new velocity.
  CHECK(s.agents[1].vy == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(s.agents[1].y == doctest::Approx(-3.0 + 0.005).epsilon(1e-12));
  CHECK(s.time_step == 1);
}

TEST_CASE("pedestrian speed clamps per axis") {
  auto cfg = one_car_config();
  cfg.ped_inits = {{0.0, 1.95, 0.0, 0.0}};
  cfg.car_inits = {{0.0, 0.0, -1000.0, 0.0}};
  auto s = initialize(cfg, 0);

  std::vector<EnvAction> acts(1);
  acts[0].ay = 1.0;  // would reach 2.05 unclamped
  step(s, acts, cfg);
  CHECK(s.agents[1].vy == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.agents[1].y == doctest::Approx(0.2).epsilon(1e-12));

  // The clamp is symmetric.
  cfg.ped_inits = {{-1.95, 0.0, 0.0, 0.0}};
  s = initialize(cfg, 0);
  acts[0] = {};
  acts[0].ax = -1.0;
  step(s, acts, cfg);
  CHECK(s.agents[1].vx == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("cars hold their lane and never reverse") {
  auto cfg = one_car_config();
  cfg.car_inits = {{0.1, 0.0, -0.5, 0.0}};
  cfg.ped_inits = {{0.0, 0.0, 0.0, 0.0}};  // standing right in the corridor
  auto s = initialize(cfg, 0);

  // Gap 0.5 with s0 = 2 saturates the brake; one step floors the speed at
  // zero and the car then holds position instead of backing up.
  step(s, no_op(1), cfg);
  CHECK(s.agents[0].vx == 0.0);
  CHECK(s.agents[0].vy == 0.0);
  CHECK(s.agents[0].x == -0.5);
  for (int i = 0; i < 4; ++i) step(s, no_op(1), cfg);
  CHECK(s.agents[0].vx == 0.0);
  CHECK(s.agents[0].x == -0.5);
}

TEST_CASE("observe adds noise to every observed component") {
  auto cfg = two_car_config();
  auto s = initialize(cfg, 0);
  EnvAction noise;
  noise.nvx = 0.1;
  noise.nvy = 0.2;
  noise.nx = 0.3;
  noise.ny = 0.4;
  AgentState o = observe(s, noise, 1, cfg);
  CHECK(o.vx == doctest::Approx(0.0 + 0.1));
  CHECK(o.vy == doctest::Approx(-0.5 + 0.2));
  CHECK(o.x == doctest::Approx(0.0 + 0.3));
  CHECK(o.y == doctest::Approx(3.0 + 0.4));

  CHECK_THROWS_AS(observe(s, noise, 2, cfg), InterfaceError);
  CHECK_THROWS_AS(observe(s, noise, -1, cfg), InterfaceError);
}

TEST_CASE("car-following acceleration") {
  IdmParams p;

  SUBCASE("free road at desired speed is coasting") {
    CHECK(idm_acceleration({11.1, 0, 0, 0}, std::nullopt, p) == doctest::Approx(0.0));
  }
  SUBCASE("free road from rest accelerates at the comfortable maximum") {
    CHECK(idm_acceleration({0.0, 0, 0, 0}, std::nullopt, p) == doctest::Approx(1.4));
  }
  SUBCASE("non-positive gap demands the hard-braking limit") {
    CHECK(idm_acceleration({5.0, 0, 0, 0}, AgentState{0, 0, 0, 0}, p) == -p.b_max);
    CHECK(idm_acceleration({5.0, 0, 1.0, 0}, AgentState{0, 0, 0.5, 0}, p) == -p.b_max);
  }
  SUBCASE("standstill at the minimum gap holds position") {
    // v = 0, gap = s0: desired gap equals actual, terms cancel exactly.
    CHECK(idm_acceleration({0.0, 0, 0, 0}, AgentState{0, 0, 2.0, 0}, p) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("closing fast on a stopped obstacle saturates the brake") {
    // At 11.1 m/s, 20 m short of a standing obstacle, the desired gap is
    // s0 + v*T + v^2 / (2*sqrt(a*b)) = 55.46 m; the formula wants far more
    // deceleration than b_max allows.
    double a = idm_acceleration({11.1, 0, -20.0, 0}, AgentState{0, 0, 0, 0}, p);
    CHECK(a == -p.b_max);
  }
  SUBCASE("output is always inside [-b_max, a_max]") {
    for (double v : {0.0, 3.0, 11.1, 20.0}) {
      for (double gap : {0.5, 2.0, 10.0, 100.0}) {
        for (double vl : {0.0, 5.0, 15.0}) {
          double a = idm_acceleration({v, 0, 0, 0}, AgentState{vl, 0, gap, 0}, p);
          CHECK(a <= p.a_max);
          CHECK(a >= -p.b_max);
        }
      }
    }
  }
}

TEST_CASE("agents update simultaneously from the pre-step snapshot") {
  auto cfg = two_car_config();
  cfg.car_inits = {{5.0, 0.0, 0.0, 0.0}, {5.0, 0.0, -8.0, 0.0}};
  cfg.ped_inits = {{0.0, 0.0, 1000.0, 50.0}};  // far away, irrelevant
  auto s = initialize(cfg, 0);

  // Follower braking computed from the snapshot gap of 8 m; if the leader
  // moved first the gap would be 8.5 m and the brake noticeably lighter.
  double expected = idm_acceleration(cfg.car_inits[1], cfg.car_inits[0], cfg.idm);
  CHECK(expected < -0.3);
  CHECK(expected > -cfg.idm.b_max);  // meaningful only when unclamped
  step(s, no_op(1), cfg);
  CHECK(s.agents[1].vx == doctest::Approx(5.0 + expected * cfg.dt).epsilon(1e-12));
}

TEST_CASE("cars only react inside the lateral corridor") {
  auto cfg = one_car_config();
  cfg.car_inits = {{11.1, 0.0, -20.0, 0.0}};

  SUBCASE("pedestrian outside the corridor is ignored") {
    cfg.ped_inits = {{0.0, 0.0, 0.0, 1.6}};
    auto s = initialize(cfg, 0);
    std::vector<Point2> accel;
    step(s, no_op(1), cfg, &accel);
    CHECK(accel[0].x == doctest::Approx(0.0));  // free road at desired speed
  }
  SUBCASE("pedestrian just inside the corridor is an obstacle") {
    cfg.ped_inits = {{0.0, 0.0, 0.0, 1.4}};
    auto s = initialize(cfg, 0);
    std::vector<Point2> accel;
    step(s, no_op(1), cfg, &accel);
    CHECK(accel[0].x < -1.0);  // hard braking
  }
  SUBCASE("positive position noise can hide a pedestrian laterally") {
    cfg.ped_inits = {{0.0, 0.0, 0.0, 0.7}};
    auto s = initialize(cfg, 0);
    std::vector<EnvAction> acts(1);
    acts[0].ny = 0.9;  // observed at y = 1.6, outside the corridor
    std::vector<Point2> accel;
    step(s, acts, cfg, &accel);
    CHECK(accel[0].x == doctest::Approx(0.0));
  }
  SUBCASE("noise can also reveal a pedestrian that is truly outside") {
    cfg.ped_inits = {{0.0, 0.0, 0.0, -1.6}};
    auto s = initialize(cfg, 0);
    std::vector<EnvAction> acts(1);
    acts[0].ny = 0.3;  // observed at y = -1.3
    std::vector<Point2> accel;
    step(s, acts, cfg, &accel);
    CHECK(accel[0].x < -1.0);
  }
}

TEST_CASE("the nearest forward obstacle wins") {
  auto cfg = two_car_config();
  cfg.car_inits = {{10.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 30.0, 0.0}};
  cfg.ped_inits = {{0.0, 0.0, 15.0, 0.0}};
  // Reaction must match the pedestrian at 15 m, not the car at 30 m.
  auto s = initialize(cfg, 0);
  std::vector<Point2> accel;
  step(s, no_op(1), cfg, &accel);
  double to_ped = idm_acceleration(cfg.car_inits[0], cfg.ped_inits[0], cfg.idm);
  CHECK(accel[0].x == doctest::Approx(to_ped).epsilon(1e-12));
}

TEST_CASE("critical set is a strict box against the lead car") {
  auto cfg = two_car_config();
  auto make_state = [&](AgentState ped) {
    auto s = initialize(cfg, 0);
    s.agents[2] = ped;
    s.agents[3] = {0, 0, 100.0, 100.0};
    return s;
  };

  CHECK(in_critical_set(make_state({0, 0, -19.6, 0.3}), cfg));        // both inside
  CHECK_FALSE(in_critical_set(make_state({0, 0, -19.6, 0.5}), cfg));  // |dy| not strict
  CHECK_FALSE(in_critical_set(make_state({0, 0, -19.5, 0.3}), cfg));  // |dx| at threshold
  CHECK_FALSE(in_critical_set(make_state({0, 0, -19.6, 0.6}), cfg));
  CHECK_FALSE(in_critical_set(make_state({0, 0, -20.6, 0.0}), cfg));

  SUBCASE("pedestrians near a trailing car do not count") {
    auto s = initialize(cfg, 0);
    s.agents[2] = {0, 0, -37.0, 0.1};  // on top of car 1
    s.agents[3] = {0, 0, 100.0, 100.0};
    CHECK_FALSE(in_critical_set(s, cfg));
  }
  SUBCASE("car/car proximity is longitudinal only") {
    auto s = initialize(cfg, 0);
    s.agents[1].x = s.agents[0].x + 0.4;
    CHECK(in_critical_set(s, cfg));
    s.agents[1].x = s.agents[0].x + 0.5;
    CHECK_FALSE(in_critical_set(s, cfg));
  }
}

TEST_CASE("step reports the event flag for the state it produces") {
  auto cfg = one_car_config();
  cfg.car_inits = {{0.0, 0.0, 0.0, 0.0}};
  cfg.ped_inits = {{0.0, -1.0, 0.3, 0.58}};  // will cross into the box this step
  auto s = initialize(cfg, 0);
  CHECK_FALSE(in_critical_set(s, cfg));
  bool flag = step(s, no_op(1), cfg);
  CHECK(flag);
  CHECK(in_critical_set(s, cfg));
}

TEST_CASE("terminal states: horizon or critical set") {
  auto cfg = one_car_config();
  auto s = initialize(cfg, 0);
  CHECK_FALSE(is_terminal(s, cfg));
  s.time_step = cfg.horizon;
  CHECK(is_terminal(s, cfg));

  s = initialize(cfg, 0);
  s.agents[1] = s.agents[0];  // overlap
  CHECK(is_terminal(s, cfg));
}

TEST_CASE("step preconditions") {
  auto cfg = one_car_config();
  auto s = initialize(cfg, 0);
  std::vector<EnvAction> wrong(2);
  CHECK_THROWS_AS(step(s, wrong, cfg), InterfaceError);

  s.time_step = cfg.horizon;
  CHECK_THROWS_AS(step(s, no_op(1), cfg), InterfaceError);
}

TEST_CASE("identical seeds and actions reproduce identical states") {
  auto cfg = two_car_config();
  auto a = initialize(cfg, 123);
  auto b = initialize(cfg, 123);
  std::vector<EnvAction> acts(2);
  acts[0] = {0.4, -0.2, 0.1, 0.0, 0.2, 0.05};
  acts[1] = {-0.3, 0.6, 0.0, 0.3, 0.0, 0.1};
  for (int t = 0; t < 20; ++t) {
    step(a, acts, cfg);
    step(b, acts, cfg);
  }
  CHECK(a == b);
}
