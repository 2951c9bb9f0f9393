#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>

#include "sentry/commands.hpp"
#include "sentry/imaging.hpp"
#include "sentry/motion.hpp"

namespace sentry {

/// Stored object color and its Euclidean RGB match radius.
struct ColorReference {
  Rgb rgb{255, 0, 0};
  int tolerance = 60;
};

struct Centroid {
  double x = 0.0;
  double y = 0.0;
};

struct QuadrantReport {
  // top-left, top-right, bottom-left, bottom-right
  std::array<std::size_t, 4> counts{};
  std::size_t total = 0;
  std::optional<Centroid> centroid;
};

struct TrackerConfig {
  double dead_zone_frac = 0.10;
  std::size_t min_pixels = 20;
  double target_fill = 0.02;

  void validate() const;
};

MotionMask match_color(const Frame& rgb, const ColorReference& ref);
QuadrantReport quadrant_report(const MotionMask& m);

/// Centroid coordinates are pixel indices; steering measures them at the
/// pixel center (index + 0.5) so that the dead zone is symmetric about w/2.
DriveCommand steer(const QuadrantReport& rep, int width, int height, const TrackerConfig& cfg);

/// True when `cx` (pixel index) lies inside the central dead zone.
bool in_dead_zone(double cx, int width, const TrackerConfig& cfg);

struct TrackResult {
  DriveCommand command = DriveCommand::Stop;
  QuadrantReport report;
  MotionMask mask;
};

TrackResult track_step(const Frame& rgb, const ColorReference& ref, const TrackerConfig& cfg);

/// Gray-scaled frame with matched pixels painted pure red.
Frame tracking_overlay(const Frame& rgb, const MotionMask& mask);

}  // namespace sentry
