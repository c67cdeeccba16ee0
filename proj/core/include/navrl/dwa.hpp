#pragma once

#include <vector>

#include "navrl/occupancy_grid.hpp"
#include "navrl/types.hpp"

namespace navrl {

struct DwaConfig {
  double v_min = 0.0;  // classic DWA does not reverse
  double v_max = 1.0;
  double omega_max = 1.5;
  double accel_lin = 1.0;       // m/s^2
  double accel_ang = 2.0;       // rad/s^2
  int samples_v = 11;
  int samples_omega = 21;
  double horizon_s = 1.5;       // arc simulation time
  double sim_step_s = 0.1;      // pose sampling interval along the arc
  double control_period_s = 0.2;
  double footprint_m = 0.25;
  double w_path = 1.0;
  double w_clear = 0.3;
  double w_speed = 0.1;
  double clearance_cap_m = 2.0;  // clearance contribution saturates here
};

struct DwaDebug {
  int admissible = 0;
  int total = 0;
  double best_score = 0.0;
};

// Dynamic-window search over constant-(v, omega) arcs. The window is
// [v +- accel_lin * control_period] x [omega +- accel_ang * control_period]
// intersected with the bounds, sampled on the configured lattice. Arcs are
// simulated for horizon_s; an arc is inadmissible if any simulated pose
// collides with a lethal cell (footprint check, out of bounds counts as
// collision). Admissible arcs score
//   w_path * (-dist(endpoint, waypoint)) + w_clear * min_clearance + w_speed * v
// with clearance the capped center distance to the nearest lethal cell.
// Best score wins; ties prefer lower |omega|, then lower v. Returns (0, 0)
// when nothing is admissible.
Action dwa_plan(const RobotState& robot, const Action& current,
                Point2 waypoint, const OccupancyGrid& grid,
                const DwaConfig& config, DwaDebug* debug = nullptr);

}  // namespace navrl
