#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sentry/centre/report.hpp"
#include "sentry/imaging.hpp"
#include "sentry/motion.hpp"
#include "sentry/rover.hpp"
#include "sentry/tracker.hpp"

namespace sentry::centre {

// ---- analyze ----------------------------------------------------------------

using MaskSink = std::function<void(std::uint64_t seq, const MotionMask& mask)>;

/// Runs the four-frame detector and alarm over a sequence in MotionDetection
/// mode. Frames before the window is warm produce records without detector
/// output.
RunReport analyze(const FrameSequence& seq, const DetectorConfig& cfg, const MaskSink& masks = {});

/// File form: loads `in`, writes the report to `out`, and when `mask_dir` is
/// given dumps every mask as mask_<seq>.pgm.
RunReport analyze_file(const std::filesystem::path& in, const std::filesystem::path& out,
                       const DetectorConfig& cfg,
                       const std::optional<std::filesystem::path>& mask_dir = std::nullopt);

// ---- scene files --------------------------------------------------------------
//
//   background <gray>
//   camera <width> <height> [<frame_rate>]
//   rover <x> <y> <heading_deg>
//   lights on|off
//   night_vision on|off
//   object <x> <y> <radius> <R> <G> <B>
//   object_at <distance> <bearing_deg> <radius> <R> <G> <B>
//
// object_at places an object relative to the rover pose declared before it;
// bearings are positive to the right.

struct SimScene {
  Scene scene;
  RoverState rover;
  int width = kDefaultWidth;
  int height = kDefaultHeight;
  double frame_rate = 10.0;
};

SimScene parse_scene(std::string_view text);
SimScene load_scene(const std::filesystem::path& path);

// ---- trace ------------------------------------------------------------------------

enum class TraceEnd : std::uint8_t { Reached, Lost, MaxSteps };
std::string_view to_string(TraceEnd e);

struct TraceOptions {
  ColorReference color;
  TrackerConfig tracker;
  int max_steps = 300;
};

struct TracePoint {
  int step = 0;
  Pose pose;
  DriveCommand command = DriveCommand::Stop;
  std::size_t matched = 0;
  std::optional<Centroid> centroid;
  bool in_dead_zone = false;
};

struct TraceResult {
  RunReport report;
  std::vector<TracePoint> trajectory;
  std::vector<DriveCommand> commands;
  TraceEnd end = TraceEnd::MaxSteps;
  RoverState final_rover;
  SerialLink link;

  /// Longest run of consecutive steps with the centroid in the dead zone.
  int longest_dead_zone_run() const;
  /// First step of the first dead-zone run of at least `length`, if any.
  std::optional<int> first_dead_zone_run(int length) const;
};

/// Closed loop: render -> track_step -> serial link -> rover -> step, with
/// dt = 1 / frame_rate. Ends on Stop (reached or lost) or after max_steps.
TraceResult trace(const SimScene& scene, const TraceOptions& opt);

/// Trajectory log: step, x, y, heading_deg, command, matched, cx, dead_zone.
std::string trajectory_text(const TraceResult& r);

// ---- gen-dataset --------------------------------------------------------------
//
//   kind square|scene
//   frames <n>
//   interval_ms <ms>
//   noise <amplitude>             uniform per-byte noise in [-a, a], seeded
//   square: width, height, side, start <x> <y>, velocity <vx> <vy>, fg, bg
//   scene:  any scene directive, plus drive <command> applied every frame

struct DatasetSpec {
  enum class Kind : std::uint8_t { Square, Scene } kind = Kind::Square;
  SquareMotionParams square;
  SimScene scene;
  DriveCommand drive = DriveCommand::Stop;
  int frames = 10;
  std::uint64_t interval_ms = 100;
  int noise = 0;

  void validate() const;
};

DatasetSpec parse_dataset_spec(std::string_view text);

/// Deterministic for a given spec and seed.
FrameSequence gen_dataset(const DatasetSpec& spec, std::uint64_t seed);

/// Adds uniform noise in [-amplitude, amplitude] to every byte, clamped.
void add_noise(Frame& f, int amplitude, std::mt19937_64& rng);

}  // namespace sentry::centre
