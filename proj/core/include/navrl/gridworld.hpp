#pragma once

#include <memory>
#include <string>
#include <vector>

#include "navrl/inflation.hpp"
#include "navrl/occupancy_grid.hpp"
#include "navrl/reward.hpp"
#include "navrl/scenario.hpp"
#include "navrl/types.hpp"

namespace navrl {

enum class EpisodeStatus { kSuccess, kCollision, kTimeout, kAborted };

const char* to_string(EpisodeStatus s);

struct EnvConfig {
  double dt_s = 0.2;
  ActionBounds bounds;
  double footprint_m = 0.25;
  InflationParams inflation;
  RewardParams reward;
  double front_ray_max_m = 8.0;
};

// True iff the pose is out of bounds or any lethal cell center lies within
// footprint_radius of (x, y).
bool check_collision(const RobotState& state, const OccupancyGrid& world,
                     double footprint_radius);

// Distance along a ray at `bearing` relative to the robot yaw until the
// ray enters a lethal cell, or max_range. Starting inside a lethal cell
// gives 0.
double raycast(const RobotState& state, const OccupancyGrid& world,
               double bearing, double max_range);

// Minimum of 9 rays spanning bearings [-pi/4, +pi/4].
double min_front_obstacle_distance(const RobotState& state,
                                   const OccupancyGrid& world, double max_range);

struct TrajectoryRow {
  double t_s = 0.0;
  double x = 0.0, y = 0.0, yaw = 0.0;
  double v = 0.0, omega = 0.0;
  double min_front_dist_m = 0.0;
  double reward = 0.0;
};

struct EpisodeRecord {
  EpisodeStatus status = EpisodeStatus::kTimeout;
  int steps = 0;
  double cumulative_reward = 0.0;
  std::string abort_reason;
  std::vector<TrajectoryRow> rows;  // rows[0] is the initial state with zero action
  // Per-mover positions aligned with rows (halt rules applied).
  std::vector<std::vector<Point2>> mover_traces;
};

// Stepwise environment. Grids are rebuilt from the scenario every step;
// movers follow their schedules, with per-mover clocks that pause while
// the robot (at its pre-step position) is within halt_within_m.
class Environment {
 public:
  Environment(ScenarioSpec spec, EnvConfig config);

  void reset();

  struct StepResult {
    RewardResult reward;
    bool done = false;
    EpisodeStatus status = EpisodeStatus::kTimeout;  // valid when done
  };
  // Clamps the action to bounds (warning logged once per episode), then
  // advances robot and movers by dt.
  StepResult step(Action action);

  const ScenarioSpec& spec() const { return spec_; }
  const EnvConfig& config() const { return config_; }
  const RobotState& robot() const { return robot_; }
  Action last_action() const { return last_action_; }
  double t() const { return t_; }
  int steps() const { return steps_; }
  bool done() const { return done_; }
  EpisodeStatus status() const { return status_; }
  const OccupancyGrid& grid_raw() const { return grid_raw_; }
  const OccupancyGrid& grid_inflated() const { return grid_inflated_; }
  const std::vector<Point2>& mover_positions() const { return mover_positions_; }
  const std::vector<TrajectoryRow>& rows() const { return rows_; }
  const std::vector<std::vector<Point2>>& mover_traces() const { return mover_traces_; }

  EpisodeRecord record() const;

 private:
  void rebuild_grids();
  void push_row(Action a, double reward_value);

  ScenarioSpec spec_;
  EnvConfig config_;
  RobotState robot_;
  Action last_action_;
  double t_ = 0.0;
  int steps_ = 0;
  bool done_ = false;
  EpisodeStatus status_ = EpisodeStatus::kTimeout;
  bool clamp_warned_ = false;
  std::vector<double> mover_clocks_;
  std::vector<Point2> mover_positions_;
  OccupancyGrid grid_raw_;
  OccupancyGrid grid_inflated_;
  std::vector<TrajectoryRow> rows_;
  std::vector<std::vector<Point2>> mover_traces_;
};

// What a policy can see when choosing an action.
struct StepContext {
  const RobotState& robot;
  Action last_action;
  double t_s;
  const OccupancyGrid& grid_raw;
  const OccupancyGrid& grid_inflated;
  const ScenarioSpec& spec;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual void reset() {}
  // May throw; a throwing policy aborts the episode.
  virtual Action act(const StepContext& ctx) = 0;
};

EpisodeRecord run_episode(const ScenarioSpec& spec, Policy& policy,
                          const EnvConfig& config);

}  // namespace navrl
