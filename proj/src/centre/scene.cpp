#include <cmath>

#include "sentry/centre/batch.hpp"
#include "sentry/centre/config.hpp"
#include "sentry/centre/scene_directives.hpp"

namespace sentry::centre {

namespace {

std::uint8_t byte_arg(const Directive& d, std::size_t i) {
  const long long v = to_integer(d, i);
  if (v < 0 || v > 255)
    throw ParameterError("line " + std::to_string(d.line) + " (" + d.name + "): value out of range 0-255");
  return std::uint8_t(v);
}

Rgb rgb_args(const Directive& d, std::size_t first) {
  return {byte_arg(d, first), byte_arg(d, first + 1), byte_arg(d, first + 2)};
}

}  // namespace

bool apply_scene_directive(SimScene& s, const Directive& d) {
  if (d.name == "background") {
    expect_args(d, 1, 1);
    s.scene.background_gray = byte_arg(d, 0);
  } else if (d.name == "camera") {
    expect_args(d, 2, 3);
    s.width = int(to_integer(d, 0));
    s.height = int(to_integer(d, 1));
    if (d.args.size() == 3) s.frame_rate = to_double(d, 2);
  } else if (d.name == "rover") {
    expect_args(d, 3, 3);
    s.rover.pose = Pose{to_double(d, 0), to_double(d, 1), normalize_angle(deg_to_rad(to_double(d, 2)))};
  } else if (d.name == "lights") {
    expect_args(d, 1, 1);
    s.rover.lights = to_flag(d, 0);
  } else if (d.name == "night_vision") {
    expect_args(d, 1, 1);
    s.rover.night_vision = to_flag(d, 0);
  } else if (d.name == "object") {
    expect_args(d, 6, 6);
    s.scene.objects.push_back({to_double(d, 0), to_double(d, 1), to_double(d, 2), rgb_args(d, 3)});
  } else if (d.name == "object_at") {
    expect_args(d, 6, 6);
    SceneObject o{0.0, 0.0, to_double(d, 2), rgb_args(d, 3)};
    point_at_bearing(s.rover.pose, to_double(d, 0), deg_to_rad(to_double(d, 1)), o.x, o.y);
    s.scene.objects.push_back(o);
  } else {
    return false;
  }
  return true;
}

void validate_scene(const SimScene& s) {
  if (s.width < 8 || s.height < 8) throw ParameterError("camera must be at least 8x8");
  if (s.width > 8192 || s.height > 8192) throw ParameterError("camera larger than 8192x8192");
  if (!(s.frame_rate > 0.0) || s.frame_rate > 1000.0)
    throw ParameterError("camera frame rate must be in (0, 1000]");
  s.scene.validate();
}

SimScene parse_scene(std::string_view text) {
  SimScene s;
  for (const auto& d : parse_directives(text)) {
    if (!apply_scene_directive(s, d))
      throw ParameterError("line " + std::to_string(d.line) + ": unknown directive '" + d.name + "'");
  }
  validate_scene(s);
  return s;
}

SimScene load_scene(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_scene(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace sentry::centre
