#pragma once

#include "astforge/scenario.hpp"

namespace astforge::testing {

// Two cars following the lane toward a crossing with two pedestrians
// converging on it from either side.
inline sim::ScenarioConfig two_car_config() {
  sim::ScenarioConfig cfg;
  cfg.car_inits = {{11.1, 0.0, -20.0, 0.0}, {12.5, 0.0, -37.0, 0.0}};
  cfg.ped_inits = {{0.0, 0.5, 0.0, -3.0}, {0.0, -0.5, 0.0, 3.0}};
  return cfg;
}

inline sim::ScenarioConfig one_car_config() {
  sim::ScenarioConfig cfg;
  cfg.car_inits = {{11.1, 0.0, -20.0, 0.0}};
  cfg.ped_inits = {{0.0, 0.5, 0.0, -3.0}};
  return cfg;
}

}  // namespace astforge::testing
