#pragma once

namespace astforge {

// Planar kinematic state of one agent (car or pedestrian).
struct AgentState {
  double vx = 0.0;
  double vy = 0.0;
  double x = 0.0;
  double y = 0.0;

  bool operator==(const AgentState&) const = default;
};

// One solver-controlled disturbance for a single pedestrian over one step:
// commanded acceleration plus additive noise on the state the cars observe.
struct EnvAction {
  double ax = 0.0;   // pedestrian acceleration, m/s^2, in [-1, 1]
  double ay = 0.0;
  double nvx = 0.0;  // observation noise, velocity then position, each in [0, 1]
  double nvy = 0.0;
  double nx = 0.0;
  double ny = 0.0;

  bool operator==(const EnvAction&) const = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

}  // namespace astforge
