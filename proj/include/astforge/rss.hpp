#pragma once

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "astforge/trajectory.hpp"
#include "astforge/types.hpp"

namespace astforge::rss {

// Worst-case assumptions used by the safe-distance formulas. Defaults follow
// the usual split: gentle lateral limits, strong longitudinal braking.
struct RssParams {
  double rho = 0.0;                  // response time, s
  double lat_a_max_acc = 0.1 * 9.8;  // lateral acceleration bound during rho
  double lat_a_min_brk = 0.05 * 9.8; // minimum lateral braking after rho
  double lon_a_max_acc = 0.1 * 9.8;  // longitudinal acceleration bound during rho
  double lon_a_min_brk = 0.7 * 9.8;  // minimum braking of the rear agent
  double lon_a_max_brk = 0.7 * 9.8;  // maximum braking assumed of the front agent

  void validate() const;  // throws ConfigError naming the offending field
};

// Absolute tolerance for all threshold comparisons in this module.
inline constexpr double kTol = 1e-9;

// Minimum initial gap that keeps a rear agent at speed v_rear from hitting
// a front agent at speed v_front when both travel in +x. Speeds must be
// non-negative (throws DomainError otherwise). Never negative.
double safe_lon_distance_same_dir(double v_rear, double v_front, const RssParams& p);

// Same-axis gap for agents driving toward each other; v_front <= 0 expected
// (the oncoming agent moves in -x), v_rear >= 0.
double safe_lon_distance_opposite(double v_rear, double v_front, const RssParams& p);

// Minimum lateral gap between a left agent (lower y, lateral speed v_left)
// and a right agent (higher y, lateral speed v_right). Never negative.
double safe_lat_distance(double v_left, double v_right, const RssParams& p);

struct DangerLabel {
  bool longitudinal = false;
  bool lateral = false;
  bool both() const { return longitudinal && lateral; }

  bool operator==(const DangerLabel&) const = default;
};

// Marks each axis dangerous when the actual gap is below the safe distance
// for that axis (with tolerance). A situation is dangerous overall only when
// both axes are, which DangerLabel::both reports.
DangerLabel classify_danger(const AgentState& car, const AgentState& other, const RssParams& p);

enum class ResponseLabel { not_applicable, proper, improper };

std::string_view to_string(ResponseLabel label);

// Per-step conduct labels for `car_index` with respect to `other_index`.
// Steps outside a dangerous situation are not_applicable. Within one
// continuous dangerous situation, the governing axis is the one whose danger
// arrived last at onset (ties go to longitudinal), and the expected response
// is evaluated per step from finite-difference accelerations:
//   - within the response window (rho after onset): acceleration toward the
//     other agent must stay within a_max_acc for the governing axis;
//   - after the window, the rear (or laterally moving) agent must brake at
//     least at a_min_brk until it has stopped, and may then hold still;
//   - a front agent moving away must simply not brake harder than a_max_brk.
// The trajectory must contain at least one step.
std::vector<ResponseLabel> classify_response(const Trajectory& traj, int car_index,
                                             int other_index, const RssParams& p);

// Fraction of steps labelled improper (0 when the input is empty).
double improper_fraction(std::span<const ResponseLabel> labels);

// Improper fraction of the scored car combining every pedestrian: a step
// counts when the car is improper toward at least one of them.
double car_improper_fraction(const Trajectory& traj, const RssParams& p);

// CSV per step: t,danger_long,danger_lat,response_label
void write_classification(std::ostream& out, const Trajectory& traj, int car_index,
                          int other_index, const RssParams& p);

}  // namespace astforge::rss
