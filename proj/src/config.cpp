#include "astforge/config.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>

#include "astforge/errors.hpp"
#include "astforge/text.hpp"

namespace astforge::config {

namespace {

[[noreturn]] void bad(std::size_t line_no, const std::string& why) {
  throw ConfigError("config line " + std::to_string(line_no) + ": " + why);
}

double to_double(std::string_view value, std::string_view key, std::size_t line_no) {
  double d = 0.0;
  if (!parse_double(value, d)) {
    bad(line_no, "key '" + std::string(key) + "': expected a number");
  }
  return d;
}

long long to_int(std::string_view value, std::string_view key, std::size_t line_no) {
  long long i = 0;
  if (!parse_int(value, i)) {
    bad(line_no, "key '" + std::string(key) + "': expected an integer");
  }
  return i;
}

std::uint64_t to_seed(std::string_view value, std::string_view key, std::size_t line_no) {
  long long i = to_int(value, key, line_no);
  if (i < 0) bad(line_no, "key '" + std::string(key) + "': seed must be non-negative");
  return static_cast<std::uint64_t>(i);
}

rewards::RewardMode to_mode(std::string_view value, std::size_t line_no) {
  if (value == "generic") return rewards::RewardMode::generic;
  if (value == "rss") return rewards::RewardMode::rss;
  if (value == "td") return rewards::RewardMode::td;
  bad(line_no, "reward mode must be one of generic, rss, td");
}

// carN.field / pedN.field initial-state keys; callers ensure the prefix
// and the dot are present.
void apply_agent_key(std::string_view key, double value, std::size_t line_no,
                     std::map<int, AgentState>& cars, std::map<int, AgentState>& peds) {
  bool is_car = key.starts_with("car");
  std::size_t dot = key.find('.');
  long long index = 0;
  if (!parse_int(key.substr(3, dot - 3), index) || index < 0) {
    bad(line_no, "key '" + std::string(key) + "': bad agent index");
  }
  AgentState& agent = (is_car ? cars : peds)[static_cast<int>(index)];
  std::string_view field = key.substr(dot + 1);
  if (field == "vx") {
    agent.vx = value;
  } else if (field == "vy") {
    agent.vy = value;
  } else if (field == "x") {
    agent.x = value;
  } else if (field == "y") {
    agent.y = value;
  } else {
    bad(line_no, "key '" + std::string(key) + "': unknown agent field");
  }
}

std::vector<AgentState> collect_agents(const std::map<int, AgentState>& by_index,
                                       const char* kind) {
  std::vector<AgentState> agents;
  int expected = 0;
  for (const auto& [index, state] : by_index) {
    if (index != expected) {
      throw ConfigError(std::string("config: ") + kind + " indices must be contiguous from 0 (missing " +
                        kind + std::to_string(expected) + ")");
    }
    agents.push_back(state);
    ++expected;
  }
  return agents;
}

void apply_key(ExperimentConfig& cfg, std::map<int, AgentState>& cars,
               std::map<int, AgentState>& peds, std::string_view key, std::string_view value,
               std::size_t line_no) {
  auto num = [&] { return to_double(value, key, line_no); };
  auto integer = [&] { return to_int(value, key, line_no); };

  bool agent_key = (key.starts_with("car") || key.starts_with("ped")) &&
                   key.find('.') != std::string_view::npos;
  if (agent_key) {
    apply_agent_key(key, num(), line_no, cars, peds);
    return;
  }

  sim::ScenarioConfig& sc = cfg.scenario;
  if (key == "dt") {
    sc.dt = num();
  } else if (key == "horizon") {
    sc.horizon = static_cast<int>(integer());
  } else if (key == "crosswalk_x") {
    sc.crosswalk_x = num();
  } else if (key == "crosswalk_halfwidth") {
    sc.crosswalk_halfwidth = num();
  } else if (key == "lane_halfwidth") {
    sc.lane_halfwidth = num();
  } else if (key == "ped_speed_max") {
    sc.ped_speed_max = num();
  } else if (key == "idm.v0") {
    sc.idm.v0 = num();
  } else if (key == "idm.a_max") {
    sc.idm.a_max = num();
  } else if (key == "idm.b_comf") {
    sc.idm.b_comf = num();
  } else if (key == "idm.b_max") {
    sc.idm.b_max = num();
  } else if (key == "idm.s0") {
    sc.idm.s0 = num();
  } else if (key == "idm.t_headway") {
    sc.idm.t_headway = num();
  } else if (key == "idm.delta") {
    sc.idm.delta = num();
  } else if (key == "thresholds.car_ped") {
    sc.thresholds.car_ped = num();
  } else if (key == "thresholds.car_car") {
    sc.thresholds.car_car = num();
  } else if (key == "rss.rho") {
    cfg.rss.rho = num();
  } else if (key == "rss.lat_a_max_acc") {
    cfg.rss.lat_a_max_acc = num();
  } else if (key == "rss.lat_a_min_brk") {
    cfg.rss.lat_a_min_brk = num();
  } else if (key == "rss.lon_a_max_acc") {
    cfg.rss.lon_a_max_acc = num();
  } else if (key == "rss.lon_a_min_brk") {
    cfg.rss.lon_a_min_brk = num();
  } else if (key == "rss.lon_a_max_brk") {
    cfg.rss.lon_a_max_brk = num();
  } else if (key == "reward.mode") {
    cfg.mode = to_mode(value, line_no);
  } else if (key == "reward.alpha") {
    cfg.reward.alpha = num();
  } else if (key == "reward.beta") {
    cfg.reward.beta = num();
  } else if (key == "reward.gamma") {
    cfg.reward.gamma = num();
  } else if (key == "reward.f_crit") {
    cfg.reward.f_crit = num();
  } else if (key == "reward.k") {
    cfg.reward.k = static_cast<int>(integer());
  } else if (key == "reward.sigma_accel") {
    cfg.reward.action_model.sigma_accel = num();
  } else if (key == "reward.sigma_noise") {
    cfg.reward.action_model.sigma_noise = num();
  } else if (key == "dissim.n") {
    cfg.dissim.n_segments = static_cast<int>(integer());
  } else if (key == "dissim.agents") {
    if (value == "lead") {
      cfg.dissim.agents = dissim::Agents::lead_car;
    } else if (value == "all") {
      cfg.dissim.agents = dissim::Agents::all;
    } else {
      bad(line_no, "dissim.agents must be lead or all");
    }
  } else if (key == "search.algo") {
    if (value == "mcts") {
      cfg.search.algo = search::SearchConfig::Algo::mcts;
    } else if (value == "random") {
      cfg.search.algo = search::SearchConfig::Algo::random;
    } else {
      bad(line_no, "search.algo must be mcts or random");
    }
  } else if (key == "search.budget") {
    cfg.search.budget = integer();
  } else if (key == "search.seed") {
    cfg.search.seed = to_seed(value, key, line_no);
  } else if (key == "search.c_ucb") {
    cfg.search.c_ucb = num();
  } else if (key == "search.c_pw") {
    cfg.search.c_pw = num();
  } else if (key == "search.alpha_pw") {
    cfg.search.alpha_pw = num();
  } else if (key == "classify.vehicle_speed_min") {
    cfg.classify_speed_min = num();
  } else if (key == "experiment.modes") {
    std::vector<rewards::RewardMode> modes;
    if (!trim(value).empty()) {
      for (std::string_view part : split(value, ',')) {
        modes.push_back(to_mode(trim(part), line_no));
      }
    }
    cfg.modes = std::move(modes);
  } else if (key == "experiment.seeds") {
    std::vector<std::uint64_t> seeds;
    if (!trim(value).empty()) {
      for (std::string_view part : split(value, ',')) {
        seeds.push_back(to_seed(trim(part), key, line_no));
      }
    }
    cfg.seeds = std::move(seeds);
  } else {
    bad(line_no, "unknown key '" + std::string(key) + "'");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  scenario.validate();
  rss.validate();
  reward.validate();
  search.validate();
  if (dissim.n_segments < 1) {
    throw ConfigError("config: dissim.n must be at least 1");
  }
  if (classify_speed_min < 0.0) {
    throw ConfigError("config: classify.vehicle_speed_min must be non-negative");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::map<int, AgentState> cars;
  std::map<int, AgentState> peds;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (std::size_t hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) continue;

    std::size_t eq = text.find('=');
    if (eq == std::string_view::npos) bad(line_no, "expected 'key = value'");
    std::string_view key = trim(text.substr(0, eq));
    std::string_view value = trim(text.substr(eq + 1));
    if (key.empty()) bad(line_no, "empty key");
    apply_key(cfg, cars, peds, key, value, line_no);
  }

  cfg.scenario.car_inits = collect_agents(cars, "car");
  cfg.scenario.ped_inits = collect_agents(peds, "ped");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  return parse_config(in);
}

rss::RssParams load_rss_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rss params file: " + path.string());

  rss::RssParams params;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (std::size_t hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) continue;
    std::size_t eq = text.find('=');
    if (eq == std::string_view::npos) bad(line_no, "expected 'key = value'");
    std::string_view key = trim(text.substr(0, eq));
    if (key.starts_with("rss.")) key = key.substr(4);
    double value = to_double(trim(text.substr(eq + 1)), key, line_no);

    if (key == "rho") {
      params.rho = value;
    } else if (key == "lat_a_max_acc") {
      params.lat_a_max_acc = value;
    } else if (key == "lat_a_min_brk") {
      params.lat_a_min_brk = value;
    } else if (key == "lon_a_max_acc") {
      params.lon_a_max_acc = value;
    } else if (key == "lon_a_min_brk") {
      params.lon_a_min_brk = value;
    } else if (key == "lon_a_max_brk") {
      params.lon_a_max_brk = value;
    } else {
      bad(line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  params.validate();
  return params;
}

}  // namespace astforge::config
