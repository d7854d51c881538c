#include "astforge/rss.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "astforge/errors.hpp"
#include "astforge/text.hpp"

namespace astforge::rss {

namespace {

double sq(double v) { return v * v; }

void require_param(bool ok, const char* field) {
  if (!ok) {
    throw ConfigError(std::string("rss params: ") + field + " must be positive");
  }
}

}  // namespace

void RssParams::validate() const {
  if (rho < 0.0) throw ConfigError("rss params: rho must be non-negative");
  require_param(lat_a_max_acc > 0.0, "lat_a_max_acc");
  require_param(lat_a_min_brk > 0.0, "lat_a_min_brk");
  require_param(lon_a_max_acc > 0.0, "lon_a_max_acc");
  require_param(lon_a_min_brk > 0.0, "lon_a_min_brk");
  require_param(lon_a_max_brk > 0.0, "lon_a_max_brk");
}

double safe_lon_distance_same_dir(double v_rear, double v_front, const RssParams& p) {
  if (v_rear < 0.0 || v_front < 0.0) {
    throw DomainError("safe_lon_distance_same_dir: speeds must be non-negative");
  }
  double v_rear_rho = v_rear + p.rho * p.lon_a_max_acc;
  double d = v_rear * p.rho + 0.5 * p.lon_a_max_acc * sq(p.rho) +
             sq(v_rear_rho) / (2.0 * p.lon_a_min_brk) - sq(v_front) / (2.0 * p.lon_a_max_brk);
  return std::max(d, 0.0);
}

double safe_lon_distance_opposite(double v_rear, double v_front, const RssParams& p) {
  if (v_rear < 0.0 || v_front > 0.0) {
    throw DomainError("safe_lon_distance_opposite: rear speed must be >= 0, front <= 0");
  }
  double v1_rho = v_rear + p.rho * p.lon_a_max_acc;
  double v2 = std::abs(v_front);
  double v2_rho = v2 + p.rho * p.lon_a_max_acc;
  double d = (v_rear + v1_rho) / 2.0 * p.rho + sq(v1_rho) / (2.0 * p.lon_a_min_brk) +
             (v2 + v2_rho) / 2.0 * p.rho + sq(v2_rho) / (2.0 * p.lon_a_min_brk);
  return std::max(d, 0.0);
}

double safe_lat_distance(double v_left, double v_right, const RssParams& p) {
  // The left agent accelerating right (+) and the right agent accelerating
  // left (-) for rho seconds, then both braking laterally at lat_a_min_brk.
  double v1_rho = v_left + p.rho * p.lat_a_max_acc;
  double v2_rho = v_right - p.rho * p.lat_a_max_acc;
  double d = (v_left + v1_rho) / 2.0 * p.rho + sq(v1_rho) / (2.0 * p.lat_a_min_brk) -
             ((v_right + v2_rho) / 2.0 * p.rho - sq(v2_rho) / (2.0 * p.lat_a_min_brk));
  return std::max(d, 0.0);
}

DangerLabel classify_danger(const AgentState& car, const AgentState& other, const RssParams& p) {
  DangerLabel label;

  // Longitudinal axis: the frame points from the rear agent to the front one,
  // which here is always +x ordering by position.
  const AgentState& rear = car.x <= other.x ? car : other;
  const AgentState& front = car.x <= other.x ? other : car;
  double gap_lon = front.x - rear.x;
  // A rear agent reversing away cannot make the situation longitudinally
  // worse; treat its speed as zero rather than rejecting the state.
  double v_rear = std::max(rear.vx, 0.0);
  double d_lon = front.vx < 0.0 ? safe_lon_distance_opposite(v_rear, front.vx, p)
                                : safe_lon_distance_same_dir(v_rear, front.vx, p);
  label.longitudinal = gap_lon < d_lon - kTol;

  const AgentState& left = car.y <= other.y ? car : other;
  const AgentState& right = car.y <= other.y ? other : car;
  double gap_lat = right.y - left.y;
  double d_lat = safe_lat_distance(left.vy, right.vy, p);
  label.lateral = gap_lat < d_lat - kTol;

  return label;
}

std::string_view to_string(ResponseLabel label) {
  switch (label) {
    case ResponseLabel::not_applicable: return "not_applicable";
    case ResponseLabel::proper: return "proper";
    case ResponseLabel::improper: return "improper";
  }
  return "unknown";
}

namespace {

// Longitudinal conduct of the car over step t of a dangerous situation that
// began at step t_d. `accel` is the finite-difference car acceleration.
ResponseLabel lon_step_label(const AgentState& car, const AgentState& other, double accel,
                             double v_next, double elapsed, const RssParams& p) {
  bool car_is_rear = car.x <= other.x;
  if (car_is_rear) {
    if (elapsed <= p.rho + kTol) {
      // Response window: may keep accelerating toward the front agent, but
      // only up to the assumed maximum.
      return accel <= p.lon_a_max_acc + kTol ? ResponseLabel::proper : ResponseLabel::improper;
    }
    // Must brake at least at lon_a_min_brk until standing still.
    if (accel <= -p.lon_a_min_brk + kTol || std::abs(v_next) <= kTol) {
      return ResponseLabel::proper;
    }
    return ResponseLabel::improper;
  }
  if (car.vx >= 0.0) {
    // Front agent moving away (or stopped): braking up to the assumed maximum
    // is always allowed, window or not; only over-braking is improper.
    return accel >= -p.lon_a_max_brk - kTol ? ResponseLabel::proper : ResponseLabel::improper;
  }
  // Front agent backing toward the rear one.
  if (elapsed <= p.rho + kTol) {
    return accel >= -p.lon_a_max_acc - kTol ? ResponseLabel::proper : ResponseLabel::improper;
  }
  // After the window: brake until stopped.
  if (accel >= p.lon_a_min_brk - kTol || std::abs(v_next) <= kTol) {
    return ResponseLabel::proper;
  }
  return ResponseLabel::improper;
}

ResponseLabel lat_step_label(const AgentState& car, const AgentState& other, double accel,
                             double v, double v_next, double elapsed, const RssParams& p) {
  bool car_is_left = car.y <= other.y;
  if (elapsed <= p.rho + kTol) {
    double toward = car_is_left ? 1.0 : -1.0;
    return accel * toward <= p.lat_a_max_acc + kTol ? ResponseLabel::proper
                                                    : ResponseLabel::improper;
  }
  if (std::abs(v) <= kTol) {
    // Lateral standstill reached: may only move away from the other agent.
    bool ok = car_is_left ? accel <= kTol : accel >= -kTol;
    return ok ? ResponseLabel::proper : ResponseLabel::improper;
  }
  if (std::abs(v_next) <= kTol) return ResponseLabel::proper;  // stops this step
  bool braking = v > 0.0 ? accel <= -p.lat_a_min_brk + kTol : accel >= p.lat_a_min_brk - kTol;
  return braking ? ResponseLabel::proper : ResponseLabel::improper;
}

}  // namespace

std::vector<ResponseLabel> classify_response(const Trajectory& traj, int car_index,
                                             int other_index, const RssParams& p) {
  const int agents = traj.num_agents();
  if (car_index < 0 || car_index >= agents || other_index < 0 || other_index >= agents ||
      car_index == other_index) {
    throw InterfaceError("classify_response: bad agent indices");
  }
  const int steps = traj.steps();
  if (steps < 1) throw InterfaceError("classify_response: trajectory has no steps");

  std::vector<DangerLabel> danger(steps + 1);
  for (int t = 0; t <= steps; ++t) {
    danger[t] = classify_danger(traj.states[t][car_index], traj.states[t][other_index], p);
  }

  std::vector<ResponseLabel> labels(steps, ResponseLabel::not_applicable);
  int t = 0;
  while (t < steps) {
    if (!danger[t].both()) {
      ++t;
      continue;
    }
    // Dangerous situation starting at t. The governing axis is the one that
    // just turned dangerous; when both did at once, longitudinal wins.
    bool lon_arrived = t == 0 || !danger[t - 1].longitudinal;
    bool use_longitudinal = lon_arrived;
    const int t_d = t;
    for (; t < steps && danger[t].both(); ++t) {
      const AgentState& car = traj.states[t][car_index];
      const AgentState& other = traj.states[t][other_index];
      const AgentState& car_next = traj.states[t + 1][car_index];
      double elapsed = (t - t_d) * traj.dt;
      if (use_longitudinal) {
        double accel = (car_next.vx - car.vx) / traj.dt;
        labels[t] = lon_step_label(car, other, accel, car_next.vx, elapsed, p);
      } else {
        double accel = (car_next.vy - car.vy) / traj.dt;
        labels[t] = lat_step_label(car, other, accel, car.vy, car_next.vy, elapsed, p);
      }
    }
  }
  return labels;
}

double improper_fraction(std::span<const ResponseLabel> labels) {
  if (labels.empty()) return 0.0;
  std::size_t improper = 0;
  for (ResponseLabel l : labels) {
    if (l == ResponseLabel::improper) ++improper;
  }
  return static_cast<double>(improper) / static_cast<double>(labels.size());
}

double car_improper_fraction(const Trajectory& traj, const RssParams& p) {
  const int steps = traj.steps();
  if (steps < 1) return 0.0;
  std::vector<char> improper(steps, 0);
  for (int j = traj.num_cars; j < traj.num_agents(); ++j) {
    auto labels = classify_response(traj, 0, j, p);
    for (int t = 0; t < steps; ++t) {
      if (labels[t] == ResponseLabel::improper) improper[t] = 1;
    }
  }
  std::size_t count = 0;
  for (char c : improper) count += c;
  return static_cast<double>(count) / static_cast<double>(steps);
}

void write_classification(std::ostream& out, const Trajectory& traj, int car_index,
                          int other_index, const RssParams& p) {
  out << "t,danger_long,danger_lat,response_label\n";
  if (traj.steps() < 1) return;  // a lone state has no conduct to label
  auto labels = classify_response(traj, car_index, other_index, p);
  for (int t = 0; t < traj.steps(); ++t) {
    DangerLabel d = classify_danger(traj.states[t][car_index], traj.states[t][other_index], p);
    out << format_double(t * traj.dt) << ',' << (d.longitudinal ? '1' : '0') << ','
        << (d.lateral ? '1' : '0') << ',' << to_string(labels[t]) << '\n';
  }
}

}  // namespace astforge::rss
