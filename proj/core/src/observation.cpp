#include "navrl/observation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "navrl/reward.hpp"

namespace navrl {

void save_raw_f32(const Image& img, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  // Host is little-endian on every supported target; data dumped as-is.
  std::fwrite(img.data.data(), sizeof(float), img.data.size(), f);
  std::fclose(f);
}

void save_channel_pgm(const Image& img, int channel, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fprintf(f, "P5\n%d %d\n255\n", img.cols, img.rows);
  for (int r = img.rows - 1; r >= 0; --r) {
    for (int c = 0; c < img.cols; ++c) {
      const float v = std::clamp(img.at(channel, r, c), 0.0f, 1.0f);
      const uint8_t b = static_cast<uint8_t>(std::lround(v * 255.0f));
      std::fwrite(&b, 1, 1, f);
    }
  }
  std::fclose(f);
}

int polar_angle_bin(double bearing, int angle_bins) {
  const double u = (wrap_angle(bearing) + M_PI) / (2.0 * M_PI);  // [0, 1)
  int b = static_cast<int>(std::floor(u * angle_bins));
  return std::clamp(b, 0, angle_bins - 1);
}

int polar_dist_bin(double range, double r_max, int dist_bins) {
  int b = static_cast<int>(std::floor(range / r_max * dist_bins));
  return std::clamp(b, 0, dist_bins - 1);
}

namespace {

float sample_cost(const OccupancyGrid& grid, Point2 p) {
  const CellIndex c = grid.world_to_cell(p);
  if (!grid.in_bounds(c)) return 0.0f;
  return static_cast<float>(std::min<int>(grid.at(c.row, c.col), kCostLethal) / 254.0);
}

void mark_square(Image& img, int row, int col, bool wrap_rows) {
  for (int dr = -1; dr <= 1; ++dr) {
    int r = row + dr;
    if (wrap_rows) {
      r = (r % img.rows + img.rows) % img.rows;
    } else if (r < 0 || r >= img.rows) {
      continue;
    }
    for (int dc = -1; dc <= 1; ++dc) {
      const int c = col + dc;
      if (c < 0 || c >= img.cols) continue;
      // White marker: contributes to every channel.
      img.at(0, r, c) = 1.0f;
      img.at(1, r, c) = 1.0f;
      img.at(2, r, c) = 1.0f;
    }
  }
}

}  // namespace

Image render_polar(const OccupancyGrid& grid, const RobotState& robot,
                   Point2 waypoint, PolarDims dims, double r_max) {
  Image img(3, dims.angle_bins, dims.dist_bins);
  const double angle_step = 2.0 * M_PI / dims.angle_bins;
  const double dist_step = r_max / dims.dist_bins;
  for (int a = 0; a < dims.angle_bins; ++a) {
    const double bearing = -M_PI + (a + 0.5) * angle_step;
    const double world_angle = robot.yaw + bearing;
    const double cs = std::cos(world_angle);
    const double sn = std::sin(world_angle);
    for (int d = 0; d < dims.dist_bins; ++d) {
      const double rho = (d + 0.5) * dist_step;
      img.at(0, a, d) = sample_cost(grid, {robot.x + rho * cs, robot.y + rho * sn});
    }
  }
  const WaypointGeometry wg = waypoint_geometry(robot, waypoint);
  const int wr = polar_angle_bin(wg.bearing_rad, dims.angle_bins);
  const int wc = polar_dist_bin(wg.distance_m, r_max, dims.dist_bins);
  mark_square(img, wr, wc, /*wrap_rows=*/true);
  return img;
}

Image render_cartesian(const OccupancyGrid& grid, const RobotState& robot,
                       Point2 waypoint, CartesianVariant variant,
                       CartesianDims dims, double window_m) {
  const int planes = variant == CartesianVariant::kChannel ? 4 : 3;
  Image img(planes, dims.rows, dims.cols);
  const double px_y = window_m / dims.rows;
  const double px_x = window_m / dims.cols;
  const double rot = variant == CartesianVariant::kRotation ? robot.yaw : 0.0;
  const double cs = std::cos(rot);
  const double sn = std::sin(rot);
  for (int r = 0; r < dims.rows; ++r) {
    const double oy = (r + 0.5) * px_y - window_m / 2.0;
    for (int c = 0; c < dims.cols; ++c) {
      const double ox = (c + 0.5) * px_x - window_m / 2.0;
      // Rotation variant: image axes are the robot body frame, so the
      // offset is rotated by +yaw into the world before sampling.
      const Point2 p{robot.x + cs * ox - sn * oy, robot.y + sn * ox + cs * oy};
      img.at(0, r, c) = sample_cost(grid, p);
    }
  }

  // Waypoint offset in the frame of the image.
  double wx = waypoint.x - robot.x;
  double wy = waypoint.y - robot.y;
  if (variant == CartesianVariant::kRotation) {
    const double bx = cs * wx + sn * wy;
    const double by = -sn * wx + cs * wy;
    wx = bx;
    wy = by;
  }
  int wr = static_cast<int>(std::floor((wy + window_m / 2.0) / px_y));
  int wc = static_cast<int>(std::floor((wx + window_m / 2.0) / px_x));
  wr = std::clamp(wr, 0, dims.rows - 1);
  wc = std::clamp(wc, 0, dims.cols - 1);
  mark_square(img, wr, wc, /*wrap_rows=*/false);

  if (variant == CartesianVariant::kArrow) {
    // Heading triangle: apex one tenth of the window ahead of center,
    // base corners behind and to the sides.
    const double len = window_m * 0.1;
    const double half_w = window_m * 0.04;
    const double cy = std::cos(robot.yaw);
    const double sy = std::sin(robot.yaw);
    const Point2 apex{len * cy, len * sy};
    const Point2 left{-0.4 * len * cy - half_w * sy, -0.4 * len * sy + half_w * cy};
    const Point2 right{-0.4 * len * cy + half_w * sy, -0.4 * len * sy - half_w * cy};
    auto cross = [](Point2 a, Point2 b, Point2 p) {
      return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    };
    for (int r = 0; r < dims.rows; ++r) {
      const double oy = (r + 0.5) * px_y - window_m / 2.0;
      for (int c = 0; c < dims.cols; ++c) {
        const double ox = (c + 0.5) * px_x - window_m / 2.0;
        const Point2 p{ox, oy};
        const double d1 = cross(apex, left, p);
        const double d2 = cross(left, right, p);
        const double d3 = cross(right, apex, p);
        const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
        const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
        if (!(neg && pos)) {
          img.at(0, r, c) = 1.0f;
          img.at(1, r, c) = 1.0f;
          img.at(2, r, c) = 1.0f;
        }
      }
    }
  } else if (variant == CartesianVariant::kChannel) {
    const float plane = static_cast<float>((robot.yaw + M_PI) / (2.0 * M_PI));
    for (int r = 0; r < dims.rows; ++r)
      for (int c = 0; c < dims.cols; ++c) img.at(3, r, c) = plane;
  }
  return img;
}

Image stack_frames(const std::vector<Image>& history, int k) {
  if (history.empty()) throw std::invalid_argument("stack_frames: empty history");
  if (k < 1) throw std::invalid_argument("stack_frames: k must be >= 1");
  const Image& last = history.back();
  Image out(last.channels * k, last.rows, last.cols);
  for (int i = 0; i < k; ++i) {
    // Oldest first; indexes before the start of history repeat frame 0.
    const int64_t idx = std::max<int64_t>(0, static_cast<int64_t>(history.size()) - k + i);
    const Image& f = history[static_cast<size_t>(idx)];
    std::copy(f.data.begin(), f.data.end(),
              out.data.begin() + static_cast<size_t>(i) * f.data.size());
  }
  return out;
}

const char* to_string(ObsMode m) {
  switch (m) {
    case ObsMode::kPolar: return "polar";
    case ObsMode::kCartesianRotation: return "cartesian_rotation";
    case ObsMode::kCartesianArrow: return "cartesian_arrow";
    case ObsMode::kCartesianChannel: return "cartesian_channel";
  }
  return "polar";
}

ObsMode obs_mode_from_string(const std::string& s) {
  if (s == "polar") return ObsMode::kPolar;
  if (s == "cartesian_rotation") return ObsMode::kCartesianRotation;
  if (s == "cartesian_arrow") return ObsMode::kCartesianArrow;
  if (s == "cartesian_channel") return ObsMode::kCartesianChannel;
  throw std::invalid_argument("unknown observation mode: " + s);
}

int obs_base_channels(ObsMode mode) {
  return mode == ObsMode::kCartesianChannel ? 4 : 3;
}

Image render_observation(const ObsConfig& cfg, const OccupancyGrid& grid,
                         const RobotState& robot, Point2 waypoint) {
  switch (cfg.mode) {
    case ObsMode::kPolar:
      return render_polar(grid, robot, waypoint, PolarDims{cfg.rows, cfg.cols},
                          cfg.r_max_m);
    case ObsMode::kCartesianRotation:
      return render_cartesian(grid, robot, waypoint, CartesianVariant::kRotation,
                              CartesianDims{cfg.rows, cfg.cols}, cfg.window_m);
    case ObsMode::kCartesianArrow:
      return render_cartesian(grid, robot, waypoint, CartesianVariant::kArrow,
                              CartesianDims{cfg.rows, cfg.cols}, cfg.window_m);
    case ObsMode::kCartesianChannel:
      return render_cartesian(grid, robot, waypoint, CartesianVariant::kChannel,
                              CartesianDims{cfg.rows, cfg.cols}, cfg.window_m);
  }
  throw std::logic_error("render_observation: bad mode");
}

}  // namespace navrl
