#pragma once

#include <cstdint>
#include <vector>

#include "navrl/occupancy_grid.hpp"

namespace navrl {

struct InflationParams {
  double inscribed_radius_m = 0.25;
  double inflation_radius_m = 1.0;
  double cost_scaling_factor = 1.5;  // 1/m, decay rate beyond the inscribed radius
};

// Exact squared Euclidean distance (in cells^2) from every cell center to
// the nearest cell with cost >= threshold. Cells at or above the threshold
// get 0. Returns row-major values; cells farther than any source (or an
// empty grid) get a large finite sentinel.
std::vector<int64_t> squared_distance_cells(const OccupancyGrid& grid,
                                            uint8_t threshold = kCostObstacle);

// Euclidean distance in meters derived from squared_distance_cells.
std::vector<double> distance_meters(const OccupancyGrid& grid,
                                    uint8_t threshold = kCostLethal);

// Spreads cost outward from kCostObstacle cells. With d the metric
// distance to the nearest obstacle cell center:
//   d == 0                      -> kCostObstacle (unchanged)
//   0 < d < inscribed_radius    -> kCostLethal
//   inscribed <= d <= inflation -> round(253 * exp(-scaling * (d - inscribed)))
//   d > inflation_radius        -> unchanged
// The result never drops below the input cost, which makes the operation
// idempotent.
OccupancyGrid inflate(const OccupancyGrid& grid, const InflationParams& params);

}  // namespace navrl
