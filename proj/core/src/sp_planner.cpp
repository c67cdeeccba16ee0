#include "navrl/sp_planner.hpp"

#include <algorithm>
#include <cmath>

#include "navrl/global_planner.hpp"

namespace navrl {

Action sp_plan(const RobotState& robot, Point2 waypoint,
               const OccupancyGrid& grid, const SpConfig& config) {
  const auto plan = plan_global(grid, {robot.x, robot.y}, waypoint, config.cost_weight);
  if (!plan || plan->points.empty()) return {0.0, 0.0};

  // Carrot point at lookahead arc length; a short path ends at the
  // waypoint itself.
  Point2 carrot = waypoint;
  double walked = 0.0;
  bool found = false;
  for (size_t i = 1; i < plan->points.size() && !found; ++i) {
    const Point2 a = plan->points[i - 1];
    const Point2 b = plan->points[i];
    const double seg = distance(a, b);
    if (walked + seg >= config.lookahead_m && seg > 0.0) {
      const double f = (config.lookahead_m - walked) / seg;
      carrot = {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
      found = true;
    }
    walked += seg;
  }

  const double bearing =
      wrap_angle(std::atan2(carrot.y - robot.y, carrot.x - robot.x) - robot.yaw);
  Action a;
  a.omega = std::clamp(config.k_omega * bearing, -config.omega_max, config.omega_max);
  a.v = config.v_max * std::max(0.0, std::cos(bearing));
  return a;
}

}  // namespace navrl
