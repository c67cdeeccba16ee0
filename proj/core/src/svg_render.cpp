#include "navrl/svg_render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace navrl {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// Forward speed sweeps dark red (stopped) to green (v_max); reverse is a
// fixed blue so back-off segments stand out.
std::string segment_color(double v, double v_max) {
  if (v < 0.0) return "#1565c0";
  double t = v_max > 0.0 ? std::min(1.0, v / v_max) : 0.0;
  int r = static_cast<int>(std::lround(211.0 + t * (46.0 - 211.0)));
  int g = static_cast<int>(std::lround(47.0 + t * (125.0 - 47.0)));
  int b = static_cast<int>(std::lround(47.0 + t * (50.0 - 47.0)));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

void write_trajectory_csv(const EpisodeRecord& rec, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot write " + path);
  std::fprintf(f, "t_s,x_m,y_m,yaw_rad,v_mps,omega_radps,min_front_dist_m,reward");
  for (size_t m = 0; m < rec.mover_traces.size(); ++m)
    std::fprintf(f, ",mv%zu_x_m,mv%zu_y_m", m, m);
  std::fprintf(f, "\n");
  for (size_t i = 0; i < rec.rows.size(); ++i) {
    const TrajectoryRow& r = rec.rows[i];
    std::fprintf(f, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g", r.t_s, r.x, r.y, r.yaw,
                 r.v, r.omega, r.min_front_dist_m, r.reward);
    for (const auto& trace : rec.mover_traces) {
      std::fprintf(f, ",%.9g,%.9g", trace[i].x, trace[i].y);
    }
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

EpisodeRecord read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  int columns = 1;
  for (char c : line) columns += (c == ',');
  if (columns < 8 || (columns - 8) % 2 != 0)
    throw std::runtime_error(path + ": unexpected column count");
  const int movers = (columns - 8) / 2;

  EpisodeRecord rec;
  rec.mover_traces.assign(movers, {});
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    vals.reserve(columns);
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (static_cast<int>(vals.size()) != columns)
      throw std::runtime_error(path + ": ragged row");
    TrajectoryRow r;
    r.t_s = vals[0];
    r.x = vals[1];
    r.y = vals[2];
    r.yaw = vals[3];
    r.v = vals[4];
    r.omega = vals[5];
    r.min_front_dist_m = vals[6];
    r.reward = vals[7];
    rec.rows.push_back(r);
    for (int m = 0; m < movers; ++m)
      rec.mover_traces[m].push_back({vals[8 + 2 * m], vals[9 + 2 * m]});
  }
  rec.steps = static_cast<int>(rec.rows.empty() ? 0 : rec.rows.size() - 1);
  for (const auto& r : rec.rows) rec.cumulative_reward += r.reward;
  return rec;
}

std::string trajectory_svg(const EpisodeRecord& rec, const ScenarioSpec& spec) {
  if (rec.rows.empty()) throw std::invalid_argument("trajectory_svg: empty record");
  const double scale = 100.0;  // px per meter
  const double w = spec.size_x_m * scale;
  const double h = spec.size_y_m * scale;
  auto px = [&](double x) { return x * scale; };
  auto py = [&](double y) { return (spec.size_y_m - y) * scale; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt(w) << " "
      << fmt(h) << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
      << "\" fill=\"#fafafa\"/>\n";

  svg << "<g fill=\"#9e9e9e\" stroke=\"none\">\n";
  for (const auto& r : spec.rects) {
    svg << "<rect x=\"" << fmt(px(r.min_corner.x)) << "\" y=\"" << fmt(py(r.max_corner.y))
        << "\" width=\"" << fmt(px(r.max_corner.x - r.min_corner.x)) << "\" height=\""
        << fmt(px(r.max_corner.y - r.min_corner.y)) << "\"/>\n";
  }
  for (const auto& c : spec.circles) {
    svg << "<circle cx=\"" << fmt(px(c.center.x)) << "\" cy=\"" << fmt(py(c.center.y))
        << "\" r=\"" << fmt(c.radius * scale) << "\"/>\n";
  }
  for (const auto& a : spec.appearing) {
    svg << "<circle cx=\"" << fmt(px(a.center.x)) << "\" cy=\"" << fmt(py(a.center.y))
        << "\" r=\"" << fmt(a.radius * scale) << "\"/>\n";
  }
  // Union of each mover's positions over the run.
  for (size_t m = 0; m < rec.mover_traces.size(); ++m) {
    double radius = m < spec.movers.size() ? spec.movers[m].radius : 0.3;
    for (const Point2& p : rec.mover_traces[m]) {
      svg << "<circle cx=\"" << fmt(px(p.x)) << "\" cy=\"" << fmt(py(p.y)) << "\" r=\""
          << fmt(radius * scale) << "\"/>\n";
    }
  }
  svg << "</g>\n";

  const double v_max = 1.0;
  svg << "<g stroke-width=\"4\" stroke-linecap=\"round\" fill=\"none\">\n";
  for (size_t i = 1; i < rec.rows.size(); ++i) {
    const TrajectoryRow& a = rec.rows[i - 1];
    const TrajectoryRow& b = rec.rows[i];
    svg << "<line x1=\"" << fmt(px(a.x)) << "\" y1=\"" << fmt(py(a.y)) << "\" x2=\""
        << fmt(px(b.x)) << "\" y2=\"" << fmt(py(b.y)) << "\" stroke=\""
        << segment_color(b.v, v_max) << "\"/>\n";
  }
  svg << "</g>\n";

  const TrajectoryRow& first = rec.rows.front();
  const TrajectoryRow& last = rec.rows.back();
  svg << "<circle cx=\"" << fmt(px(first.x)) << "\" cy=\"" << fmt(py(first.y))
      << "\" r=\"10\" fill=\"none\" stroke=\"#2e7d32\" stroke-width=\"3\"/>\n";
  svg << "<circle cx=\"" << fmt(px(spec.goal.x)) << "\" cy=\"" << fmt(py(spec.goal.y))
      << "\" r=\"10\" fill=\"#2e7d32\"/>\n";
  if (rec.status == EpisodeStatus::kCollision) {
    double cx = px(last.x), cy = py(last.y);
    svg << "<g stroke=\"#c62828\" stroke-width=\"5\">\n";
    svg << "<line x1=\"" << fmt(cx - 12) << "\" y1=\"" << fmt(cy - 12) << "\" x2=\""
        << fmt(cx + 12) << "\" y2=\"" << fmt(cy + 12) << "\"/>\n";
    svg << "<line x1=\"" << fmt(cx - 12) << "\" y1=\"" << fmt(cy + 12) << "\" x2=\""
        << fmt(cx + 12) << "\" y2=\"" << fmt(cy - 12) << "\"/>\n";
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

EpisodeStatus reconstruct_status(const EpisodeRecord& rec, const ScenarioSpec& spec,
                                 const EnvConfig& env) {
  if (rec.rows.empty()) return EpisodeStatus::kTimeout;
  const TrajectoryRow& last = rec.rows.back();
  // Collision first: it takes precedence over the goal in the terminal
  // reward, and its penalty dwarfs every shaping term.
  if (last.reward <= -env.reward.r_max / 2) return EpisodeStatus::kCollision;
  double dx = last.x - spec.goal.x;
  double dy = last.y - spec.goal.y;
  if (std::sqrt(dx * dx + dy * dy) <= env.reward.goal_tolerance_m)
    return EpisodeStatus::kSuccess;
  return EpisodeStatus::kTimeout;
}

void render_trajectory(const EpisodeRecord& rec, const ScenarioSpec& spec,
                       const std::string& path) {
  std::string xml = trajectory_svg(rec, spec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << xml;
}

}  // namespace navrl
