#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "astforge/types.hpp"

namespace astforge::sim {

// Intelligent-driver-model parameters for the car-following policy under test.
struct IdmParams {
  double v0 = 11.1;         // desired speed, m/s
  double a_max = 1.4;       // maximum comfortable acceleration
  double b_comf = 2.0;      // comfortable braking
  double b_max = 0.7 * 9.8; // hard braking limit (also the reverse-gap response)
  double s0 = 2.0;          // minimum standstill gap, m
  double t_headway = 1.5;   // desired time headway, s
  double delta = 4.0;       // free-road exponent
};

struct FailureThresholds {
  double car_ped = 0.5;  // |dx| and |dy| box around the lead car, m
  double car_car = 0.5;  // longitudinal-only |dx| between any two cars, m
};

struct ScenarioConfig {
  double dt = 0.1;
  int horizon = 50;  // steps; episodes end at time_step == horizon

  std::vector<AgentState> car_inits;  // car 0 is the lead / scored car
  std::vector<AgentState> ped_inits;

  IdmParams idm;
  FailureThresholds thresholds;

  double crosswalk_x = 0.0;         // crossing centerline along the road axis
  double crosswalk_halfwidth = 1.5; // used by failure attribution
  double lane_halfwidth = 1.5;      // lateral corridor a car reacts to
  double ped_speed_max = 2.0;       // per-axis pedestrian speed clamp, m/s

  int num_cars() const { return static_cast<int>(car_inits.size()); }
  int num_peds() const { return static_cast<int>(ped_inits.size()); }

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Full simulation state. Copyable by value so searches can clone cheaply.
struct SimState {
  int time_step = 0;
  std::vector<AgentState> agents;  // cars first (config order), then peds
  std::uint64_t rng_state = 0;     // reserved for scenario-owned stochasticity

  bool operator==(const SimState&) const = default;
};

SimState initialize(const ScenarioConfig& cfg, std::uint64_t seed);

// A pedestrian's state as seen by the cars: truth plus additive noise.
AgentState observe(const SimState& state, const EnvAction& noise, int ped_index,
                   const ScenarioConfig& cfg);

// Car-following acceleration toward the (possibly absent) lead obstacle.
// Result is clamped to [-b_max, a_max]; a non-positive gap returns -b_max.
double idm_acceleration(const AgentState& ego, const std::optional<AgentState>& lead,
                        const IdmParams& p);

// Advances one step with simultaneous agent updates (cars act on the
// pre-step snapshot). Returns true when the new state is a failure state.
// `applied_accel`, when given, receives the per-agent accelerations used.
bool step(SimState& state, std::span<const EnvAction> actions, const ScenarioConfig& cfg,
          std::vector<Point2>* applied_accel = nullptr);

bool in_critical_set(const SimState& state, const ScenarioConfig& cfg);

bool is_terminal(const SimState& state, const ScenarioConfig& cfg);

}  // namespace astforge::sim
