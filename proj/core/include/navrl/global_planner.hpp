#pragma once

#include <optional>
#include <vector>

#include "navrl/occupancy_grid.hpp"
#include "navrl/types.hpp"

namespace navrl {

struct GlobalPlan {
  std::vector<Point2> points;  // cell centers, start first, goal last
  double length_m = 0.0;       // arc length along points
};

// 8-connected Dijkstra on non-lethal cells. Traversal cost of a move into
// cell c is step_length * (1 + cost(c)/254 * cost_weight) with step_length
// 1 or sqrt(2) in cells. Ties in the priority queue break on the lower
// (row, col) of the popped cell, which pins the returned path for oracle
// comparison. Returns nullopt when start/goal are lethal or no path
// exists.
std::optional<GlobalPlan> plan_global(const OccupancyGrid& grid, Point2 start,
                                      Point2 goal, double cost_weight = 3.0);

// Total cost (in cell units, same formula as plan_global) of the cheapest
// start-to-goal path. Exposed for oracle tests.
std::optional<double> plan_cost(const OccupancyGrid& grid, Point2 start, Point2 goal,
                                double cost_weight = 3.0);

}  // namespace navrl
