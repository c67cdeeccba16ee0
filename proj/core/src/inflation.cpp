#include "navrl/inflation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace navrl {

namespace {

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher). Inputs are
// integer squared distances, so the output is exact: a double intersection
// abscissa can only be ambiguous where two parabolas give equal values.
void edt_1d(const std::vector<int64_t>& f, std::vector<int64_t>& d,
            std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s;
    for (;;) {
      const int p = v[k];
      s = (static_cast<double>(f[q] - f[p]) + static_cast<double>(q) * q -
           static_cast<double>(p) * p) /
          (2.0 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const int64_t dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

std::vector<int64_t> squared_distance_cells(const OccupancyGrid& grid,
                                            uint8_t threshold) {
  const int rows = grid.rows();
  const int cols = grid.cols();
  // Large but square-safe: sentinel^2 must not overflow int64.
  const int64_t kInf = static_cast<int64_t>(rows + cols + 1) * (rows + cols + 1);
  std::vector<int64_t> dist(static_cast<size_t>(rows) * cols, kInf);

  // Vertical pass: exact 1-D distance along each column.
  for (int c = 0; c < cols; ++c) {
    int64_t run = kInf;
    for (int r = 0; r < rows; ++r) {
      run = grid.at(r, c) >= threshold ? 0 : (run >= kInf ? kInf : run + 1);
      dist[static_cast<size_t>(r) * cols + c] = run;
    }
    run = kInf;
    for (int r = rows - 1; r >= 0; --r) {
      run = grid.at(r, c) >= threshold ? 0 : (run >= kInf ? kInf : run + 1);
      auto& cell = dist[static_cast<size_t>(r) * cols + c];
      cell = std::min(cell, run);
    }
  }

  // Horizontal pass over squared vertical distances.
  std::vector<int64_t> f(cols), d(cols);
  std::vector<int> v(cols);
  std::vector<double> z(cols + 1);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int64_t g = dist[static_cast<size_t>(r) * cols + c];
      f[c] = g >= kInf ? kInf : g * g;
    }
    edt_1d(f, d, v, z);
    for (int c = 0; c < cols; ++c) {
      dist[static_cast<size_t>(r) * cols + c] = std::min(d[c], kInf);
    }
  }
  return dist;
}

std::vector<double> distance_meters(const OccupancyGrid& grid, uint8_t threshold) {
  const std::vector<int64_t> d2 = squared_distance_cells(grid, threshold);
  std::vector<double> out(d2.size());
  const double res = grid.resolution();
  for (size_t i = 0; i < d2.size(); ++i) {
    out[i] = std::sqrt(static_cast<double>(d2[i])) * res;
  }
  return out;
}

OccupancyGrid inflate(const OccupancyGrid& grid, const InflationParams& params) {
  const std::vector<int64_t> d2 = squared_distance_cells(grid, kCostObstacle);
  OccupancyGrid out = grid;
  const double res = grid.resolution();
  const double rad = params.inflation_radius_m;
  const int64_t rad_cells2 = static_cast<int64_t>(std::ceil((rad / res) * (rad / res))) + 1;

  // Costs depend only on the integer squared cell distance; memoize.
  std::vector<int16_t> memo(static_cast<size_t>(std::max<int64_t>(rad_cells2 + 1, 1)), -1);
  auto cost_for = [&](int64_t q) -> int {
    if (q < static_cast<int64_t>(memo.size()) && memo[q] >= 0) return memo[q];
    const double d = std::sqrt(static_cast<double>(q)) * res;
    int c;
    if (d > rad) {
      c = -2;  // outside the inflation radius, leave untouched
    } else if (d < params.inscribed_radius_m) {
      c = kCostLethal;
    } else {
      const double decayed =
          253.0 * std::exp(-params.cost_scaling_factor * (d - params.inscribed_radius_m));
      c = static_cast<int>(std::lround(decayed));
    }
    if (q < static_cast<int64_t>(memo.size())) memo[q] = static_cast<int16_t>(c);
    return c;
  };

  for (int r = 0; r < out.rows(); ++r) {
    for (int c = 0; c < out.cols(); ++c) {
      const size_t i = static_cast<size_t>(r) * out.cols() + c;
      if (d2[i] == 0) continue;  // obstacle cell itself keeps kCostObstacle
      const int inflated = cost_for(d2[i]);
      if (inflated < 0) continue;
      out.at(r, c) = static_cast<uint8_t>(std::max<int>(inflated, out.at(r, c)));
    }
  }
  return out;
}

}  // namespace navrl
