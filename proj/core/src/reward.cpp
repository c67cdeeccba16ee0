#include "navrl/reward.hpp"

#include <algorithm>
#include <cmath>

namespace navrl {

WaypointGeometry waypoint_geometry(const RobotState& robot, Point2 waypoint) {
  const double dx = waypoint.x - robot.x;
  const double dy = waypoint.y - robot.y;
  return {std::hypot(dx, dy), wrap_angle(std::atan2(dy, dx) - robot.yaw)};
}

double progress_term(double old_value, double new_value) {
  const double delta = old_value - new_value;
  return delta >= 0.0 ? delta : 2.0 * delta;
}

double gaussian_penalty(const OccupancyGrid& grid, const RobotState& robot,
                        const RewardParams& params) {
  const double res = grid.resolution();
  const double hw = params.gaussian_half_width_m;
  const double inv_two_sigma2 =
      1.0 / (2.0 * params.gaussian_sigma_m * params.gaussian_sigma_m);
  const Point2 origin = grid.origin();
  const int r_lo = std::max(0, static_cast<int>(std::floor((robot.y - hw - origin.y) / res)));
  const int r_hi = std::min(grid.rows() - 1,
                            static_cast<int>(std::floor((robot.y + hw - origin.y) / res)));
  const int c_lo = std::max(0, static_cast<int>(std::floor((robot.x - hw - origin.x) / res)));
  const int c_hi = std::min(grid.cols() - 1,
                            static_cast<int>(std::floor((robot.x + hw - origin.x) / res)));
  double weighted = 0.0;
  double mass = 0.0;
  for (int r = r_lo; r <= r_hi; ++r) {
    for (int c = c_lo; c <= c_hi; ++c) {
      const Point2 p = grid.cell_center(r, c);
      const double dx = p.x - robot.x;
      const double dy = p.y - robot.y;
      if (std::abs(dx) > hw || std::abs(dy) > hw) continue;
      const double k = std::exp(-(dx * dx + dy * dy) * inv_two_sigma2);
      const double occ = std::min<int>(grid.at(r, c), kCostLethal) / 254.0;
      weighted += k * occ;
      mass += k;
    }
  }
  return mass > 0.0 ? weighted / mass : 0.0;
}

RewardResult reward(const WaypointGeometry& before, const WaypointGeometry& after,
                    bool collision_after, const OccupancyGrid& grid_after,
                    const RobotState& robot_after, const RewardParams& params) {
  RewardResult out;
  double r = params.progress_weight * progress_term(before.distance_m, after.distance_m);
  r += params.progress_weight *
       progress_term(std::abs(before.bearing_rad), std::abs(after.bearing_rad));
  out.collision = collision_after;
  out.goal = !collision_after && after.distance_m <= params.goal_tolerance_m;
  if (out.collision) {
    r -= params.r_max;
  } else if (out.goal) {
    r += params.r_max;
  }
  r -= gaussian_penalty(grid_after, robot_after, params);
  out.value = r;
  out.terminal = out.collision || out.goal;
  return out;
}

}  // namespace navrl
