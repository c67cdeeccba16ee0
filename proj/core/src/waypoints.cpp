#include "navrl/waypoints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace navrl {

std::vector<Point2> make_waypoints(const GlobalPlan& plan, double spacing_m) {
  std::vector<Point2> out;
  if (plan.points.empty()) return out;
  const Point2 goal = plan.points.back();
  double next_mark = spacing_m;
  double walked = 0.0;
  for (size_t i = 1; i < plan.points.size(); ++i) {
    const Point2 a = plan.points[i - 1];
    const Point2 b = plan.points[i];
    const double seg = distance(a, b);
    if (seg <= 0.0) continue;
    while (walked + seg >= next_mark) {
      const double f = (next_mark - walked) / seg;
      out.push_back({a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)});
      next_mark += spacing_m;
    }
    walked += seg;
  }
  // The goal is always last; drop a final sample that landed on it.
  if (!out.empty() && distance(out.back(), goal) < 1e-9) out.pop_back();
  out.push_back(goal);
  return out;
}

namespace {

bool clear_of_lethal(const OccupancyGrid& grid, Point2 p, double clearance_m) {
  const double res = grid.resolution();
  const int reach = static_cast<int>(std::ceil(clearance_m / res)) + 1;
  const CellIndex center = grid.world_to_cell(p);
  const double cc = clearance_m * clearance_m;
  for (int r = std::max(0, center.row - reach);
       r <= std::min(grid.rows() - 1, center.row + reach); ++r) {
    for (int c = std::max(0, center.col - reach);
         c <= std::min(grid.cols() - 1, center.col + reach); ++c) {
      if (!is_lethal(grid.at(r, c))) continue;
      const Point2 q = grid.cell_center(r, c);
      const double dx = q.x - p.x;
      const double dy = q.y - p.y;
      if (dx * dx + dy * dy <= cc) return false;
    }
  }
  return true;
}

}  // namespace

std::pair<Point2, WaypointWindow> select_waypoint(const std::vector<Point2>& waypoints,
                                                  const RobotState& robot,
                                                  const OccupancyGrid& grid,
                                                  double clearance_m) {
  WaypointWindow window;
  const Point2 rp{robot.x, robot.y};
  size_t closest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < waypoints.size(); ++i) {
    const double d = distance(waypoints[i], rp);
    if (d < best) {
      best = d;
      closest = i;
    }
  }
  // One past the closest; sitting exactly on waypoint i targets i+1.
  const size_t start = std::min(closest + 1, waypoints.size() - 1);
  window.entries.reserve(8);
  for (size_t k = 0; k < 8; ++k) {
    const size_t i = std::min(start + k, waypoints.size() - 1);
    window.entries.push_back(waypoints[i]);
  }
  window.selected = 7;
  for (int k = 0; k < 8; ++k) {
    if (clear_of_lethal(grid, window.entries[k], clearance_m)) {
      window.selected = k;
      break;
    }
  }
  return {window.entries[window.selected], window};
}

}  // namespace navrl
