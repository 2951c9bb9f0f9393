#pragma once

#include <cmath>
#include <numbers>

namespace sentry {

/// Planar pose of the camera-bearing platform. Heading is counter-clockwise
/// from +x, kept in (-pi, pi].
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  friend bool operator==(const Pose&, const Pose&) = default;
};

inline double normalize_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);  // [-pi, pi]
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Bearing of a world point as seen from `pose`, positive to the right of the
/// heading (clockwise), in (-pi, pi].
inline double bearing_to(const Pose& pose, double wx, double wy) {
  const double world = std::atan2(wy - pose.y, wx - pose.x);
  return normalize_angle(pose.heading - world);
}

/// World position of a point at `distance` and right-positive `bearing`.
inline void point_at_bearing(const Pose& pose, double distance, double bearing, double& wx,
                             double& wy) {
  const double world = pose.heading - bearing;
  wx = pose.x + distance * std::cos(world);
  wy = pose.y + distance * std::sin(world);
}

}  // namespace sentry
