#include "navrl/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace navrl {

using ordered_json = nlohmann::ordered_json;

Point2 mover_position(const MovingObstacle& m, double t) {
  const auto& s = m.schedule;
  if (s.empty()) return {0.0, 0.0};
  if (t <= s.front().t_s) return s.front().p;
  if (t >= s.back().t_s) return s.back().p;
  for (size_t i = 1; i < s.size(); ++i) {
    if (t <= s[i].t_s) {
      const double span = s[i].t_s - s[i - 1].t_s;
      const double a = span > 0.0 ? (t - s[i - 1].t_s) / span : 1.0;
      return {s[i - 1].p.x + a * (s[i].p.x - s[i - 1].p.x),
              s[i - 1].p.y + a * (s[i].p.y - s[i - 1].p.y)};
    }
  }
  return s.back().p;
}

std::vector<Point2> advance_moving_obstacles(const ScenarioSpec& spec, double t) {
  std::vector<Point2> out;
  out.reserve(spec.movers.size());
  for (const auto& m : spec.movers) out.push_back(mover_position(m, t));
  return out;
}

namespace {

void mark_circle(OccupancyGrid& g, Point2 center, double radius) {
  const double res = g.resolution();
  const int r_lo = std::max(0, static_cast<int>(std::floor((center.y - radius - g.origin().y) / res)));
  const int r_hi = std::min(g.rows() - 1, static_cast<int>(std::floor((center.y + radius - g.origin().y) / res)));
  const int c_lo = std::max(0, static_cast<int>(std::floor((center.x - radius - g.origin().x) / res)));
  const int c_hi = std::min(g.cols() - 1, static_cast<int>(std::floor((center.x + radius - g.origin().x) / res)));
  const double rr = radius * radius;
  for (int r = r_lo; r <= r_hi; ++r) {
    for (int c = c_lo; c <= c_hi; ++c) {
      const Point2 p = g.cell_center(r, c);
      const double dx = p.x - center.x;
      const double dy = p.y - center.y;
      if (dx * dx + dy * dy <= rr) g.at(r, c) = kCostObstacle;
    }
  }
}

void mark_rect(OccupancyGrid& g, const RectObstacle& rect) {
  const double res = g.resolution();
  const int r_lo = std::max(0, static_cast<int>(std::floor((rect.min_corner.y - g.origin().y) / res)));
  const int r_hi = std::min(g.rows() - 1, static_cast<int>(std::floor((rect.max_corner.y - g.origin().y) / res)));
  const int c_lo = std::max(0, static_cast<int>(std::floor((rect.min_corner.x - g.origin().x) / res)));
  const int c_hi = std::min(g.cols() - 1, static_cast<int>(std::floor((rect.max_corner.x - g.origin().x) / res)));
  for (int r = r_lo; r <= r_hi; ++r) {
    for (int c = c_lo; c <= c_hi; ++c) {
      const Point2 p = g.cell_center(r, c);
      if (p.x >= rect.min_corner.x && p.x <= rect.max_corner.x &&
          p.y >= rect.min_corner.y && p.y <= rect.max_corner.y) {
        g.at(r, c) = kCostObstacle;
      }
    }
  }
}

}  // namespace

OccupancyGrid rasterize_at(const ScenarioSpec& spec, double t,
                           std::span<const Point2> mover_positions) {
  const int rows = static_cast<int>(std::ceil(spec.size_y_m / spec.resolution_m));
  const int cols = static_cast<int>(std::ceil(spec.size_x_m / spec.resolution_m));
  OccupancyGrid g(rows, cols, spec.resolution_m, Point2{0.0, 0.0});
  for (const auto& rect : spec.rects) mark_rect(g, rect);
  for (const auto& c : spec.circles) mark_circle(g, c.center, c.radius);
  for (const auto& a : spec.appearing) {
    if (t >= a.appear_time_s) mark_circle(g, a.center, a.radius);
  }
  for (size_t i = 0; i < spec.movers.size() && i < mover_positions.size(); ++i) {
    mark_circle(g, mover_positions[i], spec.movers[i].radius);
  }
  return g;
}

OccupancyGrid rasterize(const ScenarioSpec& spec, double t) {
  const std::vector<Point2> positions = advance_moving_obstacles(spec, t);
  return rasterize_at(spec, t, positions);
}

void validate(const ScenarioSpec& spec) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("scenario: " + msg); };
  if (spec.size_x_m <= 0.0 || spec.size_y_m <= 0.0) fail("map size must be positive");
  if (spec.resolution_m <= 0.0) fail("resolution_m must be positive");
  if (spec.step_limit <= 0) fail("step_limit must be positive");
  auto inside = [&](double x, double y) {
    return x >= 0.0 && x < spec.size_x_m && y >= 0.0 && y < spec.size_y_m;
  };
  if (!inside(spec.start.x, spec.start.y)) fail("start pose outside the map");
  if (!inside(spec.goal.x, spec.goal.y)) fail("goal outside the map");
  for (const auto& r : spec.rects) {
    if (r.max_corner.x < r.min_corner.x || r.max_corner.y < r.min_corner.y)
      fail("rect with inverted corners");
  }
  for (const auto& c : spec.circles) {
    if (c.radius <= 0.0) fail("circle radius must be positive");
  }
  for (const auto& a : spec.appearing) {
    if (a.radius <= 0.0) fail("appearing obstacle radius must be positive");
    if (a.appear_time_s < 0.0) fail("appear_time_s must be nonnegative");
  }
  for (const auto& m : spec.movers) {
    if (m.radius <= 0.0) fail("mover radius must be positive");
    if (m.schedule.empty()) fail("mover schedule must not be empty");
    for (size_t i = 1; i < m.schedule.size(); ++i) {
      if (m.schedule[i].t_s <= m.schedule[i - 1].t_s)
        fail("mover schedule times must be strictly increasing");
    }
    if (m.halt_within_m && *m.halt_within_m <= 0.0) fail("halt_within_m must be positive");
  }
}

namespace {

ordered_json to_json(const ScenarioSpec& spec) {
  ordered_json j;
  j["name"] = spec.name;
  j["size_x_m"] = spec.size_x_m;
  j["size_y_m"] = spec.size_y_m;
  j["resolution_m"] = spec.resolution_m;
  j["start"] = {{"x_m", spec.start.x}, {"y_m", spec.start.y}, {"yaw_rad", spec.start.yaw}};
  j["goal"] = {{"x_m", spec.goal.x}, {"y_m", spec.goal.y}};
  j["step_limit"] = spec.step_limit;
  j["rects"] = ordered_json::array();
  for (const auto& r : spec.rects) {
    j["rects"].push_back({{"min_x_m", r.min_corner.x},
                          {"min_y_m", r.min_corner.y},
                          {"max_x_m", r.max_corner.x},
                          {"max_y_m", r.max_corner.y}});
  }
  j["circles"] = ordered_json::array();
  for (const auto& c : spec.circles) {
    j["circles"].push_back({{"x_m", c.center.x}, {"y_m", c.center.y}, {"radius_m", c.radius}});
  }
  j["appearing"] = ordered_json::array();
  for (const auto& a : spec.appearing) {
    j["appearing"].push_back({{"x_m", a.center.x},
                              {"y_m", a.center.y},
                              {"radius_m", a.radius},
                              {"appear_time_s", a.appear_time_s}});
  }
  j["movers"] = ordered_json::array();
  for (const auto& m : spec.movers) {
    ordered_json jm;
    jm["radius_m"] = m.radius;
    if (m.halt_within_m) jm["halt_within_m"] = *m.halt_within_m;
    jm["schedule"] = ordered_json::array();
    for (const auto& k : m.schedule) {
      jm["schedule"].push_back({{"t_s", k.t_s}, {"x_m", k.p.x}, {"y_m", k.p.y}});
    }
    j["movers"].push_back(std::move(jm));
  }
  return j;
}

ScenarioSpec from_json(const ordered_json& j) {
  ScenarioSpec spec;
  spec.name = j.value("name", std::string{});
  spec.size_x_m = j.at("size_x_m").get<double>();
  spec.size_y_m = j.at("size_y_m").get<double>();
  spec.resolution_m = j.value("resolution_m", 0.05);
  const auto& s = j.at("start");
  spec.start = {s.at("x_m").get<double>(), s.at("y_m").get<double>(),
                s.value("yaw_rad", 0.0)};
  const auto& g = j.at("goal");
  spec.goal = {g.at("x_m").get<double>(), g.at("y_m").get<double>()};
  spec.step_limit = j.value("step_limit", 200);
  for (const auto& r : j.value("rects", ordered_json::array())) {
    spec.rects.push_back({{r.at("min_x_m").get<double>(), r.at("min_y_m").get<double>()},
                          {r.at("max_x_m").get<double>(), r.at("max_y_m").get<double>()}});
  }
  for (const auto& c : j.value("circles", ordered_json::array())) {
    spec.circles.push_back({{c.at("x_m").get<double>(), c.at("y_m").get<double>()},
                            c.at("radius_m").get<double>()});
  }
  for (const auto& a : j.value("appearing", ordered_json::array())) {
    spec.appearing.push_back({{a.at("x_m").get<double>(), a.at("y_m").get<double>()},
                              a.at("radius_m").get<double>(),
                              a.at("appear_time_s").get<double>()});
  }
  for (const auto& m : j.value("movers", ordered_json::array())) {
    MovingObstacle mo;
    mo.radius = m.at("radius_m").get<double>();
    if (m.contains("halt_within_m")) mo.halt_within_m = m.at("halt_within_m").get<double>();
    for (const auto& k : m.at("schedule")) {
      mo.schedule.push_back({k.at("t_s").get<double>(),
                             {k.at("x_m").get<double>(), k.at("y_m").get<double>()}});
    }
    spec.movers.push_back(std::move(mo));
  }
  return spec;
}

}  // namespace

std::string scenario_to_json(const ScenarioSpec& spec) { return to_json(spec).dump(2); }

ScenarioSpec scenario_from_json(const std::string& text) {
  return from_json(ordered_json::parse(text));
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  ScenarioSpec spec = scenario_from_json(ss.str());
  validate(spec);
  return spec;
}

void save_scenario(const ScenarioSpec& spec, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << scenario_to_json(spec) << "\n";
}

}  // namespace navrl
