#include "navrl/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "navrl/log.hpp"

namespace navrl {

const char* to_string(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::kSuccess: return "success";
    case EpisodeStatus::kCollision: return "collision";
    case EpisodeStatus::kTimeout: return "timeout";
    case EpisodeStatus::kAborted: return "aborted";
  }
  return "unknown";
}

bool check_collision(const RobotState& state, const OccupancyGrid& world,
                     double footprint_radius) {
  const CellIndex center = world.world_to_cell({state.x, state.y});
  if (!world.in_bounds(center)) return true;
  const double res = world.resolution();
  const int reach = static_cast<int>(std::ceil(footprint_radius / res)) + 1;
  const double rr = footprint_radius * footprint_radius;
  for (int r = std::max(0, center.row - reach);
       r <= std::min(world.rows() - 1, center.row + reach); ++r) {
    for (int c = std::max(0, center.col - reach);
         c <= std::min(world.cols() - 1, center.col + reach); ++c) {
      if (!is_lethal(world.at(r, c))) continue;
      const Point2 p = world.cell_center(r, c);
      const double dx = p.x - state.x;
      const double dy = p.y - state.y;
      if (dx * dx + dy * dy <= rr) return true;
    }
  }
  return false;
}

double raycast(const RobotState& state, const OccupancyGrid& world,
               double bearing, double max_range) {
  const double angle = state.yaw + bearing;
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  const double res = world.resolution();

  CellIndex cell = world.world_to_cell({state.x, state.y});
  if (world.in_bounds(cell) && is_lethal(world.at(cell.row, cell.col))) return 0.0;

  // Amanatides-Woo traversal: track the ray parameter t (meters) at which
  // the ray crosses the next vertical/horizontal cell boundary.
  const int step_c = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_r = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
  const double inf = std::numeric_limits<double>::infinity();
  const double t_delta_c = step_c != 0 ? res / std::abs(dx) : inf;
  const double t_delta_r = step_r != 0 ? res / std::abs(dy) : inf;

  auto boundary = [&](double origin, double pos, int idx, int step, double dir) {
    if (step == 0) return inf;
    const double edge = origin + (step > 0 ? (idx + 1) : idx) * res;
    return (edge - pos) / dir;
  };
  double t_max_c = boundary(world.origin().x, state.x, cell.col, step_c, dx);
  double t_max_r = boundary(world.origin().y, state.y, cell.row, step_r, dy);

  double t = 0.0;
  while (t < max_range) {
    if (t_max_c < t_max_r) {
      t = t_max_c;
      t_max_c += t_delta_c;
      cell.col += step_c;
    } else {
      t = t_max_r;
      t_max_r += t_delta_r;
      cell.row += step_r;
    }
    if (!world.in_bounds(cell)) break;
    if (is_lethal(world.at(cell.row, cell.col))) return std::min(t, max_range);
  }
  return max_range;
}

double min_front_obstacle_distance(const RobotState& state,
                                   const OccupancyGrid& world, double max_range) {
  double best = max_range;
  for (int k = 0; k < 9; ++k) {
    const double bearing = -M_PI / 4.0 + k * (M_PI / 16.0);
    best = std::min(best, raycast(state, world, bearing, max_range));
  }
  return best;
}

Environment::Environment(ScenarioSpec spec, EnvConfig config)
    : spec_(std::move(spec)), config_(config) {
  validate(spec_);
  reset();
}

void Environment::reset() {
  robot_ = spec_.start;
  robot_.yaw = wrap_angle(robot_.yaw);
  last_action_ = {};
  t_ = 0.0;
  steps_ = 0;
  done_ = false;
  status_ = EpisodeStatus::kTimeout;
  clamp_warned_ = false;
  mover_clocks_.assign(spec_.movers.size(), 0.0);
  mover_positions_.clear();
  for (const auto& m : spec_.movers) mover_positions_.push_back(mover_position(m, 0.0));
  rebuild_grids();
  rows_.clear();
  mover_traces_.assign(spec_.movers.size(), {});
  for (size_t i = 0; i < mover_positions_.size(); ++i)
    mover_traces_[i].push_back(mover_positions_[i]);
  push_row({}, 0.0);
}

void Environment::rebuild_grids() {
  grid_raw_ = rasterize_at(spec_, t_, mover_positions_);
  grid_inflated_ = inflate(grid_raw_, config_.inflation);
}

void Environment::push_row(Action a, double reward_value) {
  TrajectoryRow row;
  row.t_s = t_;
  row.x = robot_.x;
  row.y = robot_.y;
  row.yaw = robot_.yaw;
  row.v = a.v;
  row.omega = a.omega;
  row.min_front_dist_m =
      min_front_obstacle_distance(robot_, grid_raw_, config_.front_ray_max_m);
  row.reward = reward_value;
  rows_.push_back(row);
}

Environment::StepResult Environment::step(Action action) {
  StepResult out;
  if (done_) {
    out.done = true;
    out.status = status_;
    return out;
  }
  const Action requested = action;
  action = clamp_action(action, config_.bounds);
  if (!clamp_warned_ &&
      (requested.v != action.v || requested.omega != action.omega)) {
    log::warn("action (%.3f, %.3f) clamped to bounds", requested.v, requested.omega);
    clamp_warned_ = true;
  }

  const WaypointGeometry before = waypoint_geometry(robot_, spec_.goal);
  const RobotState prev = robot_;

  robot_ = step_unicycle(robot_, action, config_.dt_s);
  // Mover clocks pause while the robot (at its decision-time position) is
  // within the halt distance.
  for (size_t i = 0; i < spec_.movers.size(); ++i) {
    const auto& m = spec_.movers[i];
    const bool halted =
        m.halt_within_m &&
        distance({prev.x, prev.y}, mover_positions_[i]) < *m.halt_within_m;
    if (!halted) mover_clocks_[i] += config_.dt_s;
    mover_positions_[i] = mover_position(m, mover_clocks_[i]);
  }
  t_ += config_.dt_s;
  steps_ += 1;
  rebuild_grids();

  const bool collided = check_collision(robot_, grid_raw_, config_.footprint_m);
  const WaypointGeometry after = waypoint_geometry(robot_, spec_.goal);
  out.reward = reward(before, after, collided, grid_inflated_, robot_, config_.reward);

  last_action_ = action;
  for (size_t i = 0; i < mover_positions_.size(); ++i)
    mover_traces_[i].push_back(mover_positions_[i]);
  push_row(action, out.reward.value);

  if (out.reward.collision) {
    done_ = true;
    status_ = EpisodeStatus::kCollision;
  } else if (out.reward.goal) {
    done_ = true;
    status_ = EpisodeStatus::kSuccess;
  } else if (steps_ >= spec_.step_limit) {
    done_ = true;
    status_ = EpisodeStatus::kTimeout;
  }
  out.done = done_;
  out.status = status_;
  return out;
}

EpisodeRecord Environment::record() const {
  EpisodeRecord rec;
  rec.status = status_;
  rec.steps = steps_;
  rec.cumulative_reward = 0.0;
  for (const auto& r : rows_) rec.cumulative_reward += r.reward;
  rec.rows = rows_;
  rec.mover_traces = mover_traces_;
  return rec;
}

EpisodeRecord run_episode(const ScenarioSpec& spec, Policy& policy,
                          const EnvConfig& config) {
  Environment env(spec, config);
  policy.reset();
  std::string abort_reason;
  bool aborted = false;
  while (!env.done()) {
    StepContext ctx{env.robot(),      env.last_action(),   env.t(),
                    env.grid_raw(),   env.grid_inflated(), env.spec()};
    Action a;
    try {
      a = policy.act(ctx);
    } catch (const std::exception& e) {
      aborted = true;
      abort_reason = e.what();
      break;
    }
    env.step(a);
  }
  EpisodeRecord rec = env.record();
  if (aborted) {
    rec.status = EpisodeStatus::kAborted;
    rec.abort_reason = abort_reason;
  }
  return rec;
}

}  // namespace navrl
