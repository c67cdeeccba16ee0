#include "navrl/scenario_suite.hpp"

#include <cmath>
#include <stdexcept>

#include "navrl/rng.hpp"

namespace navrl {

namespace {

constexpr double kSize = 8.0;
constexpr double kRes = 0.05;
constexpr double kWall = 0.2;

ScenarioSpec base_room(const std::string& name) {
  ScenarioSpec s;
  s.name = name;
  s.size_x_m = kSize;
  s.size_y_m = kSize;
  s.resolution_m = kRes;
  s.rects.push_back({{0.0, 0.0}, {kSize, kWall}});
  s.rects.push_back({{0.0, kSize - kWall}, {kSize, kSize}});
  s.rects.push_back({{0.0, 0.0}, {kWall, kSize}});
  s.rects.push_back({{kSize - kWall, 0.0}, {kSize, kSize}});
  return s;
}

}  // namespace

ScenarioSpec scenario_c1(uint64_t) {
  ScenarioSpec s = base_room("c1_doorway");
  // Dividing wall with a 0.9 m doorway centered at (4, 4). The start faces
  // the doorway: an endpoint-distance objective has no heading term, so a
  // backward start would park DWA forever (rotating in place ties with
  // standing still and the tie-break prefers omega = 0).
  s.rects.push_back({{3.9, kWall}, {4.1, 3.55}});
  s.rects.push_back({{3.9, 4.45}, {4.1, kSize - kWall}});
  s.start = {2.5, 4.0, 0.0};
  s.goal = {5.5, 4.0};
  s.step_limit = 200;
  return s;
}

ScenarioSpec scenario_c2(uint64_t) {
  ScenarioSpec s = base_room("c2_surprise");
  s.start = {1.5, 4.0, 0.0};
  s.goal = {6.5, 4.0};
  s.step_limit = 200;
  // Dead on the straight-line global plan, appearing after 2 control steps.
  s.appearing.push_back({{4.0, 4.0}, 0.3, 0.4});
  return s;
}

ScenarioSpec scenario_c3(uint64_t seed) {
  ScenarioSpec s = base_room("c3_head_on");
  s.start = {1.5, 4.0, 0.0};
  s.goal = {6.5, 4.0};
  s.step_limit = 200;
  Rng rng(0xC3000000u + seed);
  double speed = rng.uniform(1.1, 1.5);
  double offset_y = rng.uniform(-0.15, 0.15);
  double delay = rng.uniform(0.0, 0.4);
  MovingObstacle ped;
  ped.radius = 0.3;
  ped.halt_within_m = 1.0;
  // Starts far enough behind the goal that the goal cell is plannable at
  // t=0; the walk still crosses the goal early in the episode.
  Point2 from{7.3, 4.0 + offset_y};
  Point2 to{0.5, 4.0 + offset_y};
  double duration = distance(from, to) / speed;
  ped.schedule = {{0.0, from}, {delay, from}, {delay + duration, to}};
  s.movers.push_back(ped);
  return s;
}

ScenarioSpec scenario_c4(uint64_t seed) {
  ScenarioSpec s = base_room("c4_crossing");
  s.start = {1.5, 4.0, 0.0};
  s.goal = {6.5, 4.0};
  s.step_limit = 200;
  Rng rng(0xC4000000u + seed);
  double speed = rng.uniform(1.0, 1.4);
  double delay = rng.uniform(0.3, 0.7);
  MovingObstacle ped;
  ped.radius = 0.3;
  Point2 from{4.0, 7.0};
  Point2 to{4.0, 1.0};
  double duration = distance(from, to) / speed;
  ped.schedule = {{0.0, from}, {delay, from}, {delay + duration, to}};
  s.movers.push_back(ped);
  return s;
}

ScenarioSpec training_world(int idx) {
  int k = ((idx % 3) + 3) % 3;
  ScenarioSpec s = base_room("train" + std::to_string(k));
  s.start = {2.0, 4.0, 0.0};
  s.goal = {6.0, 4.0};
  s.step_limit = 80;
  const double cy[3] = {4.0, 4.9, 3.1};
  s.circles.push_back({{4.0, cy[k]}, 0.45});
  return s;
}

ScenarioSpec eval_world(int idx) {
  if (idx < 0) throw std::invalid_argument("eval_world: negative index");
  ScenarioSpec s = base_room("eval" + std::to_string(idx));
  s.start = {2.0, 4.0, 0.0};
  s.goal = {6.0, 4.0};
  s.step_limit = 80;
  Rng rng(0xE7A10000u + static_cast<uint64_t>(idx));
  double cx = rng.uniform(3.3, 4.7);
  double cy = rng.uniform(3.2, 4.8);
  double radius = rng.uniform(0.35, 0.55);
  s.circles.push_back({{cx, cy}, radius});
  return s;
}

ScenarioSpec random_world(uint64_t seed, int max_obstacles) {
  ScenarioSpec s = base_room("random" + std::to_string(seed));
  s.start = {1.5, 1.5, 0.0};
  s.goal = {6.5, 6.5};
  s.step_limit = 200;
  Rng rng(0x52A2D000u + seed);
  int n = static_cast<int>(rng.uniform_int(1, max_obstacles));
  for (int i = 0; i < n; ++i) {
    for (int tries = 0; tries < 100; ++tries) {
      Point2 c{rng.uniform(1.2, 6.8), rng.uniform(1.2, 6.8)};
      double r = rng.uniform(0.2, 0.6);
      if (distance(c, {s.start.x, s.start.y}) < r + 0.8) continue;
      if (distance(c, s.goal) < r + 0.8) continue;
      s.circles.push_back({c, r});
      break;
    }
  }
  return s;
}

ScenarioSpec scenario_by_name(const std::string& name, uint64_t seed) {
  if (name == "c1") return scenario_c1(seed);
  if (name == "c2") return scenario_c2(seed);
  if (name == "c3") return scenario_c3(seed);
  if (name == "c4") return scenario_c4(seed);
  auto parse_index = [&](const std::string& prefix) -> int {
    return std::stoi(name.substr(prefix.size()));
  };
  try {
    if (name.rfind("train", 0) == 0) return training_world(parse_index("train"));
    if (name.rfind("eval", 0) == 0) return eval_world(parse_index("eval"));
    if (name.rfind("random", 0) == 0)
      return random_world(static_cast<uint64_t>(parse_index("random")));
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  throw std::invalid_argument("unknown scenario: " + name);
}

std::vector<std::string> benchmark_scenario_names() {
  return {"c1", "c2", "c3", "c4"};
}

}  // namespace navrl
