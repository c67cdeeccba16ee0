#pragma once

#include <vector>

#include "navrl/global_planner.hpp"
#include "navrl/occupancy_grid.hpp"
#include "navrl/types.hpp"

namespace navrl {

// Points at arc-length multiples of `spacing` along the plan; the goal is
// always the final entry and is never duplicated.
std::vector<Point2> make_waypoints(const GlobalPlan& plan, double spacing_m);

struct WaypointWindow {
  std::vector<Point2> entries;  // always 8, padded by repeating the goal
  int selected = 0;             // index into entries
};

// Builds the 8-entry window starting one past the waypoint closest to the
// robot, then picks the first entry whose distance to the nearest lethal
// cell exceeds `clearance_m` (the last entry if none qualifies).
std::pair<Point2, WaypointWindow> select_waypoint(const std::vector<Point2>& waypoints,
                                                  const RobotState& robot,
                                                  const OccupancyGrid& grid,
                                                  double clearance_m);

}  // namespace navrl
