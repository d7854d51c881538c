#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "astforge/types.hpp"

namespace astforge {

// One complete (or in-progress) episode. Time series are indexed by state:
// states[t] holds all agents at step t, for t = 0..steps(). Per-step series
// (actions, applied accelerations, rewards) have length steps(); entry t
// describes the transition from state t to state t+1.
struct Trajectory {
  double dt = 0.1;
  int num_cars = 0;

  std::vector<std::vector<AgentState>> states;
  std::vector<std::vector<EnvAction>> actions;
  std::vector<std::vector<Point2>> applied_accel;
  std::vector<char> event_flags;  // per state: inside the failure set?
  std::vector<double> rewards;

  double total_reward = 0.0;
  bool failure_flag = false;
  int failure_step = -1;  // first state index with event_flags set

  int steps() const { return static_cast<int>(actions.size()); }
  int num_agents() const { return states.empty() ? 0 : static_cast<int>(states[0].size()); }
  int num_peds() const { return num_agents() - num_cars; }

  // (x, y) series of one agent across all recorded states.
  std::vector<Point2> agent_points(int agent_index) const;

  // Begins a fresh episode at `s0`; prior contents are discarded.
  void reset(std::span<const AgentState> s0, bool event0, double dt_, int num_cars_);

  // Appends one transition and the state it produced. The matching reward
  // arrives separately via add_reward once it has been evaluated (it may
  // depend on the trajectory including the new state).
  void push_transition(std::span<const EnvAction> acts, std::vector<Point2> accel,
                       std::span<const AgentState> next_state, bool event);
  void add_reward(double reward);

  bool operator==(const Trajectory&) const = default;
};

// Renders "car0".."carN" / "ped0".."pedN" agent labels used by the exports.
std::string agent_label(const Trajectory& traj, int agent_index);

// CSV with one row per (state, agent):
//   t,agent_id,vx,vy,x,y,ax_applied,ay_applied,event_flag
// `t` is in seconds. Accelerations on a row are the ones applied over the
// step that leaves state t; rows for the final state carry zeros.
void write_trajectory(std::ostream& out, const Trajectory& traj);

// Inverse of write_trajectory for the fields the file carries. Observation
// noise and rewards are not serialized; the reader leaves them zero.
// Throws ConfigError with a line number on malformed input.
Trajectory read_trajectory(std::istream& in);

}  // namespace astforge
