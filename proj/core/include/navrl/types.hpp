#pragma once

#include <cmath>
#include <cstdint>

namespace navrl {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

// Maps any angle to [-pi, pi). wrap_angle(pi) == -pi.
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * M_PI;
  return a - two_pi * std::floor((a + M_PI) / two_pi);
}

struct RobotState {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;  // radians, [-pi, pi)
};

// Commanded body velocities, held constant over one control period.
struct Action {
  double v = 0.0;      // m/s, forward positive
  double omega = 0.0;  // rad/s, counterclockwise positive
};

struct ActionBounds {
  double v_min = -0.5;
  double v_max = 1.0;
  double omega_max = 1.5;
};

inline Action clamp_action(Action a, const ActionBounds& b) {
  a.v = std::fmin(std::fmax(a.v, b.v_min), b.v_max);
  a.omega = std::fmin(std::fmax(a.omega, -b.omega_max), b.omega_max);
  return a;
}

// Forward Euler unicycle integration over dt seconds.
inline RobotState step_unicycle(const RobotState& s, const Action& a, double dt) {
  RobotState out;
  out.x = s.x + a.v * std::cos(s.yaw) * dt;
  out.y = s.y + a.v * std::sin(s.yaw) * dt;
  out.yaw = wrap_angle(s.yaw + a.omega * dt);
  return out;
}

}  // namespace navrl
