#pragma once

#include <string>
#include <vector>

#include "navrl/occupancy_grid.hpp"
#include "navrl/types.hpp"

namespace navrl {

// Dense CHW float image, values in [0, 1]. Row index grows with +y of
// whatever frame the renderer uses.
struct Image {
  int channels = 0;
  int rows = 0;
  int cols = 0;
  std::vector<float> data;

  Image() = default;
  Image(int c, int r, int w)
      : channels(c), rows(r), cols(w),
        data(static_cast<size_t>(c) * r * w, 0.0f) {}

  float& at(int c, int r, int col) {
    return data[(static_cast<size_t>(c) * rows + r) * cols + col];
  }
  float at(int c, int r, int col) const {
    return data[(static_cast<size_t>(c) * rows + r) * cols + col];
  }
  size_t size() const { return data.size(); }
};

// Little-endian raw float32 dump, C-H-W order, preceded by no header; the
// shape goes in the filename or surrounding metadata.
void save_raw_f32(const Image& img, const std::string& path);

// Single channel of an image as a PGM (values scaled from [0,1] to 0..255).
void save_channel_pgm(const Image& img, int channel, const std::string& path);

struct PolarDims {
  int angle_bins = 64;
  int dist_bins = 64;
};

// Angle bin for a bearing in [-pi, pi) relative to the robot yaw; bin 0
// starts at -pi. Distance bin for a range in [0, r_max); ranges at or
// beyond r_max clamp to the last bin.
int polar_angle_bin(double bearing, int angle_bins);
int polar_dist_bin(double range, double r_max, int dist_bins);

// Robot-centric polar image: rows = angle bins over [-pi, pi) relative to
// yaw, cols = distance bins over [0, r_max]. Channel 0 holds normalized
// obstacle cost sampled at each bin center (nearest cell), channels 1 and
// 2 hold the waypoint marker; the marker also projects into channel 0 so
// the waypoint square is "white". The marker is a 3x3 square around the
// waypoint bin, wrapping across the angle seam and clamped at the distance
// edges. A waypoint beyond r_max clamps to the last distance column.
Image render_polar(const OccupancyGrid& grid, const RobotState& robot,
                   Point2 waypoint, PolarDims dims, double r_max);

enum class CartesianVariant { kRotation, kArrow, kChannel };

struct CartesianDims {
  int rows = 64;
  int cols = 64;
};

// Cartesian window (window_m x window_m, centered on the robot) sampled at
// nearest cells. Rows grow with +y. Variants encode heading differently:
//   Rotation: window resampled rotated by -yaw (heading always +x in image)
//   Arrow:    axis-aligned window plus a white heading triangle at center
//   Channel:  axis-aligned window plus a constant plane (yaw + pi) / 2pi
// All variants draw the waypoint as a 3x3 white square (clamped into the
// window). Channel variant has 4 planes, the others 3.
Image render_cartesian(const OccupancyGrid& grid, const RobotState& robot,
                       Point2 waypoint, CartesianVariant variant,
                       CartesianDims dims, double window_m = 8.0);

// Channel-concatenation of the k most recent frames, oldest first; short
// histories repeat the oldest frame. Throws std::invalid_argument on an
// empty history or k < 1.
Image stack_frames(const std::vector<Image>& history, int k);

enum class ObsMode { kPolar, kCartesianRotation, kCartesianArrow, kCartesianChannel };

const char* to_string(ObsMode m);
ObsMode obs_mode_from_string(const std::string& s);

struct ObsConfig {
  ObsMode mode = ObsMode::kPolar;
  int rows = 64;
  int cols = 64;
  double r_max_m = 8.0;    // polar range
  double window_m = 8.0;   // cartesian window edge
  int frame_stack = 1;
};

// Channels of a single (unstacked) frame for the mode.
int obs_base_channels(ObsMode mode);

Image render_observation(const ObsConfig& cfg, const OccupancyGrid& grid,
                         const RobotState& robot, Point2 waypoint);

}  // namespace navrl
