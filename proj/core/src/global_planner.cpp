#include "navrl/global_planner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

namespace navrl {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct QueueEntry {
  double cost;
  int row;
  int col;
  bool operator>(const QueueEntry& o) const {
    return std::tie(cost, row, col) > std::tie(o.cost, o.row, o.col);
  }
};

struct SearchResult {
  std::vector<double> dist;
  std::vector<int> parent;
  bool reached = false;
};

SearchResult dijkstra(const OccupancyGrid& grid, CellIndex start, CellIndex goal,
                      double cost_weight) {
  const int rows = grid.rows();
  const int cols = grid.cols();
  const size_t n = static_cast<size_t>(rows) * cols;
  SearchResult res;
  res.dist.assign(n, std::numeric_limits<double>::infinity());
  res.parent.assign(n, -1);

  auto id = [cols](int r, int c) { return static_cast<size_t>(r) * cols + c; };
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> pq;
  res.dist[id(start.row, start.col)] = 0.0;
  pq.push({0.0, start.row, start.col});

  static constexpr int dr[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
  static constexpr int dc[8] = {-1, 0, 1, -1, 1, -1, 0, 1};

  while (!pq.empty()) {
    const QueueEntry e = pq.top();
    pq.pop();
    const size_t i = id(e.row, e.col);
    if (e.cost > res.dist[i]) continue;  // stale entry
    if (e.row == goal.row && e.col == goal.col) {
      res.reached = true;
      break;
    }
    for (int k = 0; k < 8; ++k) {
      const int nr = e.row + dr[k];
      const int nc = e.col + dc[k];
      if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
      const uint8_t cost = grid.at(nr, nc);
      if (is_lethal(cost)) continue;
      const double step = (dr[k] != 0 && dc[k] != 0) ? kSqrt2 : 1.0;
      const double edge = step * (1.0 + cost / 254.0 * cost_weight);
      const double cand = e.cost + edge;
      const size_t j = id(nr, nc);
      if (cand < res.dist[j]) {
        res.dist[j] = cand;
        res.parent[j] = static_cast<int>(i);
        pq.push({cand, nr, nc});
      }
    }
  }
  return res;
}

}  // namespace

std::optional<GlobalPlan> plan_global(const OccupancyGrid& grid, Point2 start,
                                      Point2 goal, double cost_weight) {
  const CellIndex s = grid.world_to_cell(start);
  const CellIndex g = grid.world_to_cell(goal);
  if (!grid.in_bounds(s) || !grid.in_bounds(g)) return std::nullopt;
  if (is_lethal(grid.at(s.row, s.col)) || is_lethal(grid.at(g.row, g.col)))
    return std::nullopt;

  if (s == g) {
    GlobalPlan plan;
    plan.points.push_back(grid.cell_center(s));
    return plan;
  }

  const SearchResult res = dijkstra(grid, s, g, cost_weight);
  const size_t gi = static_cast<size_t>(g.row) * grid.cols() + g.col;
  if (!res.reached && !std::isfinite(res.dist[gi])) return std::nullopt;

  GlobalPlan plan;
  std::vector<Point2> rev;
  for (int i = static_cast<int>(gi); i >= 0; i = res.parent[i]) {
    rev.push_back(grid.cell_center(i / grid.cols(), i % grid.cols()));
    if (res.parent[i] < 0) break;
  }
  plan.points.assign(rev.rbegin(), rev.rend());
  for (size_t i = 1; i < plan.points.size(); ++i) {
    plan.length_m += distance(plan.points[i - 1], plan.points[i]);
  }
  return plan;
}

std::optional<double> plan_cost(const OccupancyGrid& grid, Point2 start, Point2 goal,
                                double cost_weight) {
  const CellIndex s = grid.world_to_cell(start);
  const CellIndex g = grid.world_to_cell(goal);
  if (!grid.in_bounds(s) || !grid.in_bounds(g)) return std::nullopt;
  if (is_lethal(grid.at(s.row, s.col)) || is_lethal(grid.at(g.row, g.col)))
    return std::nullopt;
  if (s == g) return 0.0;
  const SearchResult res = dijkstra(grid, s, g, cost_weight);
  const size_t gi = static_cast<size_t>(g.row) * grid.cols() + g.col;
  if (!std::isfinite(res.dist[gi])) return std::nullopt;
  return res.dist[gi];
}

}  // namespace navrl
