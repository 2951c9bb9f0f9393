#include <algorithm>

#include "sentry/centre/batch.hpp"
#include "sentry/centre/scene_directives.hpp"

namespace sentry::centre {

namespace {

[[noreturn]] void spec_error(const Directive& d, const std::string& what) {
  throw ParameterError("line " + std::to_string(d.line) + " (" + d.name + "): " + what);
}

int int_arg(const Directive& d, std::size_t i) {
  const long long v = to_integer(d, i);
  if (v < -1'000'000 || v > 1'000'000) spec_error(d, "value out of range");
  return int(v);
}

bool apply_square_directive(SquareMotionParams& p, const Directive& d) {
  if (d.name == "width") {
    expect_args(d, 1, 1);
    p.width = int_arg(d, 0);
  } else if (d.name == "height") {
    expect_args(d, 1, 1);
    p.height = int_arg(d, 0);
  } else if (d.name == "side") {
    expect_args(d, 1, 1);
    p.side = int_arg(d, 0);
  } else if (d.name == "start") {
    expect_args(d, 2, 2);
    p.start_x = int_arg(d, 0);
    p.start_y = int_arg(d, 1);
  } else if (d.name == "velocity") {
    expect_args(d, 2, 2);
    p.velocity_x = int_arg(d, 0);
    p.velocity_y = int_arg(d, 1);
  } else if (d.name == "fg" || d.name == "bg") {
    expect_args(d, 1, 1);
    const int v = int_arg(d, 0);
    if (v < 0 || v > 255) spec_error(d, "value out of range 0-255");
    (d.name == "fg" ? p.fg : p.bg) = std::uint8_t(v);
  } else {
    return false;
  }
  return true;
}

}  // namespace

void DatasetSpec::validate() const {
  if (frames < 1 || frames > 100000) throw ParameterError("frames must be in [1, 100000]");
  if (noise < 0 || noise > 255) throw ParameterError("noise must be in [0, 255]");
  if (interval_ms == 0) throw ParameterError("interval_ms must be positive");
  if (kind == Kind::Square) {
    SquareMotionParams p = square;
    p.frames = frames;
    p.frame_interval_ms = interval_ms;
    p.validate();
  } else {
    validate_scene(scene);
  }
}

DatasetSpec parse_dataset_spec(std::string_view text) {
  const auto directives = parse_directives(text);
  DatasetSpec spec;
  for (const auto& d : directives) {
    if (d.name != "kind") continue;
    expect_args(d, 1, 1);
    if (d.args[0] == "square") spec.kind = DatasetSpec::Kind::Square;
    else if (d.args[0] == "scene") spec.kind = DatasetSpec::Kind::Scene;
    else spec_error(d, "kind must be square or scene");
  }
  for (const auto& d : directives) {
    if (d.name == "kind") continue;
    if (d.name == "frames") {
      expect_args(d, 1, 1);
      spec.frames = int_arg(d, 0);
    } else if (d.name == "interval_ms") {
      expect_args(d, 1, 1);
      const int v = int_arg(d, 0);
      if (v <= 0) spec_error(d, "must be positive");
      spec.interval_ms = std::uint64_t(v);
    } else if (d.name == "noise") {
      expect_args(d, 1, 1);
      spec.noise = int_arg(d, 0);
    } else if (spec.kind == DatasetSpec::Kind::Square) {
      if (!apply_square_directive(spec.square, d)) spec_error(d, "unknown directive for kind square");
    } else if (d.name == "drive") {
      expect_args(d, 1, 1);
      const auto cmd = parse_drive(d.args[0]);
      if (!cmd) spec_error(d, "unknown drive command '" + d.args[0] + "'");
      spec.drive = *cmd;
    } else if (!apply_scene_directive(spec.scene, d)) {
      spec_error(d, "unknown directive for kind scene");
    }
  }
  spec.validate();
  return spec;
}

void add_noise(Frame& f, int amplitude, std::mt19937_64& rng) {
  if (amplitude <= 0) return;
  const auto span = std::uint64_t(2 * amplitude + 1);
  for (auto& b : f.data()) {
    // Modulo keeps the stream identical across standard libraries.
    const int delta = int(rng() % span) - amplitude;
    b = std::uint8_t(std::clamp(int(b) + delta, 0, 255));
  }
}

FrameSequence gen_dataset(const DatasetSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  FrameSequence out;
  if (spec.kind == DatasetSpec::Kind::Square) {
    SquareMotionParams p = spec.square;
    p.frames = spec.frames;
    p.frame_interval_ms = spec.interval_ms;
    for (Frame f : synth_motion_sequence(p)) {
      add_noise(f, spec.noise, rng);
      out.push_back(std::move(f));
    }
    return out;
  }

  RoverState rover = apply_command(spec.scene.rover, spec.drive, 0);
  const double dt = double(spec.interval_ms) / 1000.0;
  for (int t = 0; t < spec.frames; ++t) {
    Frame f = render_scene(spec.scene.scene, rover.pose, spec.scene.width, spec.scene.height,
                           {rover.lights, rover.night_vision}, std::uint64_t(t) * spec.interval_ms,
                           std::uint64_t(t));
    add_noise(f, spec.noise, rng);
    out.push_back(std::move(f));
    rover = step(rover, dt);
  }
  return out;
}

}  // namespace sentry::centre
