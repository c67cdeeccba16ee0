#pragma once

#include "navrl/occupancy_grid.hpp"
#include "navrl/types.hpp"

namespace navrl {

// Distance and bearing to the active waypoint, both taken from the robot
// pose. bearing = wrap(angle_to_waypoint - yaw).
struct WaypointGeometry {
  double distance_m = 0.0;
  double bearing_rad = 0.0;
};

WaypointGeometry waypoint_geometry(const RobotState& robot, Point2 waypoint);

struct RewardParams {
  double r_max = 10.0;
  double gaussian_sigma_m = 0.5;
  double gaussian_half_width_m = 1.0;  // truncation square half side
  double goal_tolerance_m = 0.15;
  double progress_weight = 1.0;  // applied to both distance and bearing progress
};

// (old - new), doubled when negative: moving away costs twice what moving
// back gains.
double progress_term(double old_value, double new_value);

// Correlation of a unit-peak Gaussian kernel (width sigma, truncated to a
// square of the given half width) with the normalized cell costs around
// the robot, divided by the kernel mass over the same window. Cells
// outside the grid are excluded from both sums. Costs are normalized as
// min(cost, 254)/254 so fully lethal surroundings give exactly 1.
double gaussian_penalty(const OccupancyGrid& grid, const RobotState& robot,
                        const RewardParams& params);

struct RewardResult {
  double value = 0.0;
  bool terminal = false;
  bool collision = false;
  bool goal = false;
};

// Shaped step reward:
//   progress(d) + progress(|bearing|) - r_max [collision] + r_max [goal] - G(s')
// Collision takes precedence over goal when both fire in one step; the
// episode is terminal exactly when one of the r_max terms fires.
RewardResult reward(const WaypointGeometry& before, const WaypointGeometry& after,
                    bool collision_after, const OccupancyGrid& grid_after,
                    const RobotState& robot_after, const RewardParams& params);

}  // namespace navrl
