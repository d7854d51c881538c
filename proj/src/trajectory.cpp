#include "astforge/trajectory.hpp"

#include <istream>
#include <ostream>

#include "astforge/errors.hpp"
#include "astforge/text.hpp"

namespace astforge {

std::vector<Point2> Trajectory::agent_points(int agent_index) const {
  if (agent_index < 0 || agent_index >= num_agents()) {
    throw InterfaceError("agent_points: agent index out of range");
  }
  std::vector<Point2> pts;
  pts.reserve(states.size());
  for (const auto& snapshot : states) {
    pts.push_back({snapshot[agent_index].x, snapshot[agent_index].y});
  }
  return pts;
}

void Trajectory::reset(std::span<const AgentState> s0, bool event0, double dt_, int num_cars_) {
  dt = dt_;
  num_cars = num_cars_;
  states.assign(1, std::vector<AgentState>(s0.begin(), s0.end()));
  actions.clear();
  applied_accel.clear();
  event_flags.assign(1, event0 ? 1 : 0);
  rewards.clear();
  total_reward = 0.0;
  failure_flag = event0;
  failure_step = event0 ? 0 : -1;
}

void Trajectory::push_transition(std::span<const EnvAction> acts, std::vector<Point2> accel,
                                 std::span<const AgentState> next_state, bool event) {
  actions.emplace_back(acts.begin(), acts.end());
  applied_accel.push_back(std::move(accel));
  states.emplace_back(next_state.begin(), next_state.end());
  event_flags.push_back(event ? 1 : 0);
  if (event && !failure_flag) {
    failure_flag = true;
    failure_step = static_cast<int>(states.size()) - 1;
  }
}

void Trajectory::add_reward(double reward) {
  rewards.push_back(reward);
  total_reward += reward;
}

std::string agent_label(const Trajectory& traj, int agent_index) {
  if (agent_index < traj.num_cars) {
    return "car" + std::to_string(agent_index);
  }
  return "ped" + std::to_string(agent_index - traj.num_cars);
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  out << "t,agent_id,vx,vy,x,y,ax_applied,ay_applied,event_flag\n";
  const int agents = traj.num_agents();
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    const std::string ts = format_double(static_cast<double>(t) * traj.dt);
    const bool has_accel = t < traj.applied_accel.size();
    for (int a = 0; a < agents; ++a) {
      const AgentState& s = traj.states[t][a];
      out << ts << ',' << agent_label(traj, a) << ',' << format_double(s.vx) << ','
          << format_double(s.vy) << ',' << format_double(s.x) << ',' << format_double(s.y)
          << ',' << format_double(has_accel ? traj.applied_accel[t][a].x : 0.0) << ','
          << format_double(has_accel ? traj.applied_accel[t][a].y : 0.0) << ','
          << (traj.event_flags[t] ? '1' : '0') << '\n';
    }
  }
}

namespace {

[[noreturn]] void bad_line(std::size_t line_no, const std::string& why) {
  throw ConfigError("trajectory file line " + std::to_string(line_no) + ": " + why);
}

struct RawRow {
  double t;
  bool is_car;
  int index;
  AgentState state;
  Point2 accel;
  bool event;
};

}  // namespace

Trajectory read_trajectory(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw ConfigError("trajectory file: empty input");
  ++line_no;
  if (trim(line) != "t,agent_id,vx,vy,x,y,ax_applied,ay_applied,event_flag") {
    bad_line(line_no, "unrecognized header");
  }

  // time value -> (agent id -> row), keyed in file order
  std::vector<double> times;
  std::vector<std::vector<RawRow>> by_time;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = trim(line);
    if (text.empty()) continue;
    auto fields = split(text, ',');
    if (fields.size() != 9) bad_line(line_no, "expected 9 fields");

    RawRow row;
    if (!parse_double(trim(fields[0]), row.t)) bad_line(line_no, "bad time value");

    std::string_view id = trim(fields[1]);
    std::string_view kind;
    if (id.starts_with("car")) {
      row.is_car = true;
      kind = id.substr(3);
    } else if (id.starts_with("ped")) {
      row.is_car = false;
      kind = id.substr(3);
    } else {
      bad_line(line_no, "agent_id must start with car/ped");
    }
    long long idx = 0;
    if (!parse_int(kind, idx) || idx < 0) bad_line(line_no, "bad agent index");
    row.index = static_cast<int>(idx);

    double vals[6];
    for (int i = 0; i < 6; ++i) {
      if (!parse_double(trim(fields[2 + i]), vals[i])) bad_line(line_no, "bad numeric field");
    }
    row.state = {vals[0], vals[1], vals[2], vals[3]};
    row.accel = {vals[4], vals[5]};

    std::string_view flag = trim(fields[8]);
    if (flag == "0") {
      row.event = false;
    } else if (flag == "1") {
      row.event = true;
    } else {
      bad_line(line_no, "event_flag must be 0 or 1");
    }

    if (times.empty() || row.t > times.back()) {
      times.push_back(row.t);
      by_time.emplace_back();
    } else if (row.t != times.back()) {
      bad_line(line_no, "time values must be non-decreasing");
    }
    by_time.back().push_back(row);
  }
  if (times.empty()) throw ConfigError("trajectory file: no data rows");

  // Establish the agent roster from the first timestep.
  int num_cars = 0;
  int num_peds = 0;
  for (const RawRow& r : by_time[0]) {
    (r.is_car ? num_cars : num_peds) += 1;
  }
  if (num_cars < 1 || num_peds < 1) {
    throw ConfigError("trajectory file: needs at least one car and one pedestrian");
  }
  const int agents = num_cars + num_peds;

  Trajectory traj;
  traj.num_cars = num_cars;
  traj.dt = times.size() > 1 ? times[1] - times[0] : 0.1;
  traj.states.assign(times.size(), std::vector<AgentState>(agents));
  traj.applied_accel.assign(times.size() - 1,
                            std::vector<Point2>(agents));
  traj.actions.assign(times.size() - 1, std::vector<EnvAction>(num_peds));
  traj.event_flags.assign(times.size(), 0);

  for (std::size_t t = 0; t < by_time.size(); ++t) {
    if (static_cast<int>(by_time[t].size()) != agents) {
      throw ConfigError("trajectory file: timestep " + std::to_string(t) +
                        " does not list every agent exactly once");
    }
    std::vector<bool> seen(agents, false);
    for (const RawRow& r : by_time[t]) {
      int a = r.is_car ? r.index : num_cars + r.index;
      if (a < 0 || a >= agents || (r.is_car && r.index >= num_cars) || seen[a]) {
        throw ConfigError("trajectory file: inconsistent agent ids at timestep " +
                          std::to_string(t));
      }
      seen[a] = true;
      traj.states[t][a] = r.state;
      if (t + 1 < by_time.size()) {
        traj.applied_accel[t][a] = r.accel;
        if (!r.is_car) {
          traj.actions[t][r.index].ax = r.accel.x;
          traj.actions[t][r.index].ay = r.accel.y;
        }
      }
      if (r.event) traj.event_flags[t] = 1;
    }
  }

  for (std::size_t t = 0; t < traj.event_flags.size(); ++t) {
    if (traj.event_flags[t]) {
      traj.failure_flag = true;
      traj.failure_step = static_cast<int>(t);
      break;
    }
  }
  return traj;
}

}  // namespace astforge
