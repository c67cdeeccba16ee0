#include "navrl/dwa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "navrl/inflation.hpp"

namespace navrl {

Action dwa_plan(const RobotState& robot, const Action& current,
                Point2 waypoint, const OccupancyGrid& grid,
                const DwaConfig& config, DwaDebug* debug) {
  // One distance field per call serves every arc's clearance and
  // admissibility checks. Distances are measured between cell centers.
  const std::vector<double> dist = distance_meters(grid, kCostLethal);
  auto clearance_at = [&](double x, double y) -> double {
    const CellIndex c = grid.world_to_cell({x, y});
    if (!grid.in_bounds(c)) return -1.0;  // out of bounds: treated as collision
    return dist[static_cast<size_t>(c.row) * grid.cols() + c.col];
  };

  const double v_lo = std::max(config.v_min,
                               current.v - config.accel_lin * config.control_period_s);
  const double v_hi = std::min(config.v_max,
                               current.v + config.accel_lin * config.control_period_s);
  const double w_lo = std::max(-config.omega_max,
                               current.omega - config.accel_ang * config.control_period_s);
  const double w_hi = std::min(config.omega_max,
                               current.omega + config.accel_ang * config.control_period_s);

  const int n_sub = std::max(1, static_cast<int>(std::lround(config.horizon_s /
                                                             config.sim_step_s)));
  Action best_action{0.0, 0.0};
  double best_score = -std::numeric_limits<double>::infinity();
  bool any = false;
  int admissible = 0;

  for (int iv = 0; iv < config.samples_v; ++iv) {
    const double fv = config.samples_v > 1
                          ? static_cast<double>(iv) / (config.samples_v - 1)
                          : 0.0;
    const double v = v_lo + fv * (v_hi - v_lo);
    for (int iw = 0; iw < config.samples_omega; ++iw) {
      const double fw = config.samples_omega > 1
                            ? static_cast<double>(iw) / (config.samples_omega - 1)
                            : 0.0;
      const double w = w_lo + fw * (w_hi - w_lo);

      // Forward-Euler rollout at sim_step resolution.
      RobotState s = robot;
      double min_clear = std::numeric_limits<double>::infinity();
      bool collides = false;
      for (int k = 0; k < n_sub; ++k) {
        s = step_unicycle(s, {v, w}, config.sim_step_s);
        const double d = clearance_at(s.x, s.y);
        if (d <= config.footprint_m) {
          collides = true;
          break;
        }
        min_clear = std::min(min_clear, d);
      }
      if (collides) continue;
      ++admissible;

      min_clear = std::min(min_clear, config.clearance_cap_m);
      const double score = config.w_path * (-distance({s.x, s.y}, waypoint)) +
                           config.w_clear * min_clear + config.w_speed * v;
      const bool better =
          !any || score > best_score ||
          (score == best_score &&
           (std::abs(w) < std::abs(best_action.omega) ||
            (std::abs(w) == std::abs(best_action.omega) && v < best_action.v)));
      if (better) {
        any = true;
        best_score = score;
        best_action = {v, w};
      }
    }
  }

  if (debug) {
    debug->admissible = admissible;
    debug->total = config.samples_v * config.samples_omega;
    debug->best_score = any ? best_score : 0.0;
  }
  return any ? best_action : Action{0.0, 0.0};
}

}  // namespace navrl
