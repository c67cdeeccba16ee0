#pragma once

#include "navrl/occupancy_grid.hpp"
#include "navrl/types.hpp"

namespace navrl {

struct SpConfig {
  double lookahead_m = 0.6;
  double k_omega = 2.0;
  double v_max = 1.0;
  double omega_max = 1.5;
  double cost_weight = 3.0;  // forwarded to the shortest-path search
};

// Recomputes a grid shortest path to the waypoint and steers at the point
// `lookahead_m` along it: omega = clamp(k_omega * bearing), v = v_max *
// max(0, cos(bearing)). Never reverses. No path (or start/goal in lethal
// cells) gives the stop action.
Action sp_plan(const RobotState& robot, Point2 waypoint,
               const OccupancyGrid& grid, const SpConfig& config);

}  // namespace navrl
