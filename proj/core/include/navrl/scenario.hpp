#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "navrl/occupancy_grid.hpp"
#include "navrl/types.hpp"

namespace navrl {

struct RectObstacle {
  Point2 min_corner;
  Point2 max_corner;
};

struct CircleObstacle {
  Point2 center;
  double radius = 0.0;
};

// Static disk that is absent until appear_time_s, then permanent.
struct AppearingObstacle {
  Point2 center;
  double radius = 0.0;
  double appear_time_s = 0.0;
};

struct MoverKeyframe {
  double t_s = 0.0;
  Point2 p;
};

// Disk following a piecewise-linear schedule. Position holds at both ends
// of the schedule. If halt_within_m is set, the schedule clock pauses
// while the robot is within that distance of the disk center.
struct MovingObstacle {
  double radius = 0.0;
  std::vector<MoverKeyframe> schedule;
  std::optional<double> halt_within_m;
};

// World description. The map covers [0, size_x_m) x [0, size_y_m) with
// cell (0,0) at the origin.
struct ScenarioSpec {
  std::string name;
  double size_x_m = 8.0;
  double size_y_m = 8.0;
  double resolution_m = 0.05;
  RobotState start;
  Point2 goal;
  std::vector<RectObstacle> rects;
  std::vector<CircleObstacle> circles;
  std::vector<AppearingObstacle> appearing;
  std::vector<MovingObstacle> movers;
  int step_limit = 200;
};

// Position on the schedule at clock time t, clamped to the first/last
// keyframes outside the schedule span.
Point2 mover_position(const MovingObstacle& m, double t);

// Scheduled positions of every mover at time t, ignoring halt rules.
std::vector<Point2> advance_moving_obstacles(const ScenarioSpec& spec, double t);

// Cost grid at time t with movers at their scheduled positions. A cell is
// marked kCostObstacle when its center lies inside obstacle geometry
// (boundaries inclusive).
OccupancyGrid rasterize(const ScenarioSpec& spec, double t);

// Same, but with explicit mover positions (the environment supplies
// halt-adjusted ones).
OccupancyGrid rasterize_at(const ScenarioSpec& spec, double t,
                           std::span<const Point2> mover_positions);

// Throws std::invalid_argument describing the first violated constraint.
void validate(const ScenarioSpec& spec);

ScenarioSpec load_scenario(const std::string& path);
void save_scenario(const ScenarioSpec& spec, const std::string& path);
std::string scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const std::string& text);

}  // namespace navrl
