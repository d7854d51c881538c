#include "astforge/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "astforge/errors.hpp"
#include "astforge/random.hpp"

namespace astforge::sim {

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError("scenario config: " + field + " " + why);
}

// Nearest obstacle strictly ahead of `ego` inside its lateral corridor.
// Other cars are seen exactly; pedestrians through this step's noisy
// observation. Only the longitudinal gap and speed matter to the follower.
std::optional<AgentState> find_lead(const SimState& state, int car_index,
                                    std::span<const EnvAction> actions,
                                    const ScenarioConfig& cfg) {
  const AgentState& ego = state.agents[car_index];
  std::optional<AgentState> best;
  double best_gap = 0.0;

  auto consider = [&](const AgentState& cand) {
    double gap = cand.x - ego.x;
    if (gap <= 0.0) return;
    if (std::abs(cand.y - ego.y) >= cfg.lane_halfwidth) return;
    if (!best || gap < best_gap) {
      best = cand;
      best_gap = gap;
    }
  };

  for (int i = 0; i < cfg.num_cars(); ++i) {
    if (i != car_index) consider(state.agents[i]);
  }
  for (int j = 0; j < cfg.num_peds(); ++j) {
    consider(observe(state, actions[j], j, cfg));
  }
  return best;
}

}  // namespace

void ScenarioConfig::validate() const {
  require(dt > 0.0, "dt", "must be positive");
  require(horizon >= 1, "horizon", "must be at least 1");
  require(!car_inits.empty(), "car_inits", "needs at least one car");
  require(!ped_inits.empty(), "ped_inits", "needs at least one pedestrian");
  require(ped_speed_max > 0.0, "ped_speed_max", "must be positive");
  require(lane_halfwidth > 0.0, "lane_halfwidth", "must be positive");
  require(crosswalk_halfwidth > 0.0, "crosswalk_halfwidth", "must be positive");
  require(thresholds.car_ped > 0.0, "thresholds.car_ped", "must be positive");
  require(thresholds.car_car > 0.0, "thresholds.car_car", "must be positive");
  require(idm.v0 > 0.0, "idm.v0", "must be positive");
  require(idm.a_max > 0.0, "idm.a_max", "must be positive");
  require(idm.b_comf > 0.0, "idm.b_comf", "must be positive");
  require(idm.b_max > 0.0, "idm.b_max", "must be positive");
  require(idm.s0 >= 0.0, "idm.s0", "must be non-negative");
  require(idm.t_headway >= 0.0, "idm.t_headway", "must be non-negative");
}

SimState initialize(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  SimState s;
  s.time_step = 0;
  s.agents.reserve(cfg.car_inits.size() + cfg.ped_inits.size());
  s.agents.insert(s.agents.end(), cfg.car_inits.begin(), cfg.car_inits.end());
  s.agents.insert(s.agents.end(), cfg.ped_inits.begin(), cfg.ped_inits.end());
  s.rng_state = rng::splitmix64(seed);
  return s;
}

AgentState observe(const SimState& state, const EnvAction& noise, int ped_index,
                   const ScenarioConfig& cfg) {
  if (ped_index < 0 || ped_index >= cfg.num_peds()) {
    throw InterfaceError("observe: pedestrian index out of range");
  }
  AgentState o = state.agents[cfg.num_cars() + ped_index];
  o.vx += noise.nvx;
  o.vy += noise.nvy;
  o.x += noise.nx;
  o.y += noise.ny;
  return o;
}

double idm_acceleration(const AgentState& ego, const std::optional<AgentState>& lead,
                        const IdmParams& p) {
  double v = std::max(ego.vx, 0.0);
  double accel = p.a_max * (1.0 - std::pow(v / p.v0, p.delta));
  if (lead) {
    double gap = lead->x - ego.x;
    if (gap <= 0.0) return -p.b_max;
    double closing = v - lead->vx;
    double s_star =
        p.s0 + v * p.t_headway + v * closing / (2.0 * std::sqrt(p.a_max * p.b_comf));
    accel -= p.a_max * (s_star / gap) * (s_star / gap);
  }
  return std::clamp(accel, -p.b_max, p.a_max);
}

bool step(SimState& state, std::span<const EnvAction> actions, const ScenarioConfig& cfg,
          std::vector<Point2>* applied_accel) {
  const int nc = cfg.num_cars();
  const int np = cfg.num_peds();
  if (static_cast<int>(actions.size()) != np) {
    throw InterfaceError("step: expected one action per pedestrian");
  }
  if (state.time_step >= cfg.horizon) {
    throw InterfaceError("step: past the episode horizon");
  }

  std::vector<Point2> accel(static_cast<std::size_t>(nc + np));
  for (int i = 0; i < nc; ++i) {
    accel[i] = {idm_acceleration(state.agents[i], find_lead(state, i, actions, cfg), cfg.idm),
                0.0};
  }
  for (int j = 0; j < np; ++j) {
    accel[nc + j] = {actions[j].ax, actions[j].ay};
  }

  // Semi-implicit Euler: velocity first, then position with the new velocity.
  for (int i = 0; i < nc; ++i) {
    AgentState& a = state.agents[i];
    a.vx = std::max(a.vx + accel[i].x * cfg.dt, 0.0);  // cars do not reverse
    a.vy = 0.0;
    a.x += a.vx * cfg.dt;
  }
  for (int j = 0; j < np; ++j) {
    AgentState& a = state.agents[nc + j];
    a.vx = std::clamp(a.vx + accel[nc + j].x * cfg.dt, -cfg.ped_speed_max, cfg.ped_speed_max);
    a.vy = std::clamp(a.vy + accel[nc + j].y * cfg.dt, -cfg.ped_speed_max, cfg.ped_speed_max);
    a.x += a.vx * cfg.dt;
    a.y += a.vy * cfg.dt;
  }

  ++state.time_step;
  if (applied_accel) *applied_accel = std::move(accel);
  return in_critical_set(state, cfg);
}

bool in_critical_set(const SimState& state, const ScenarioConfig& cfg) {
  const int nc = cfg.num_cars();
  const int np = cfg.num_peds();
  const AgentState& lead = state.agents[0];
  for (int j = 0; j < np; ++j) {
    const AgentState& p = state.agents[nc + j];
    if (std::abs(p.x - lead.x) < cfg.thresholds.car_ped &&
        std::abs(p.y - lead.y) < cfg.thresholds.car_ped) {
      return true;
    }
  }
  for (int i = 0; i < nc; ++i) {
    for (int j = i + 1; j < nc; ++j) {
      if (std::abs(state.agents[i].x - state.agents[j].x) < cfg.thresholds.car_car) {
        return true;
      }
    }
  }
  return false;
}

bool is_terminal(const SimState& state, const ScenarioConfig& cfg) {
  return state.time_step >= cfg.horizon || in_critical_set(state, cfg);
}

}  // namespace astforge::sim
