#include "sentry/rover.hpp"

#include <cmath>
#include <stdexcept>

#include "sentry/imaging.hpp"

namespace sentry {

RoverState apply_command(RoverState s, const Command& cmd, std::int64_t now_ms) {
  if (const auto* drive = std::get_if<DriveCommand>(&cmd)) {
    s.active_drive = *drive;
    s.last_command_ms = now_ms;
    return s;
  }
  switch (std::get<AuxCommand>(cmd)) {
    case AuxCommand::LightsOn: s.lights = true; break;
    case AuxCommand::LightsOff: s.lights = false; break;
    case AuxCommand::NightVisionOn: s.night_vision = true; break;
    case AuxCommand::NightVisionOff: s.night_vision = false; break;
    case AuxCommand::CameraStart: s.camera_on = true; break;
    case AuxCommand::CameraStop: s.camera_on = false; break;
  }
  return s;
}

RoverState step(RoverState s, double dt_s) {
  if (!(dt_s > 0.0) || !std::isfinite(dt_s)) throw ParameterError("step needs dt > 0");
  double advance = 0.0;
  double turn = 0.0;
  switch (s.active_drive) {
    case DriveCommand::Stop: return s;
    case DriveCommand::Forward: advance = kLinearSpeed; break;
    case DriveCommand::Backward: advance = -kLinearSpeed; break;
    case DriveCommand::Left: turn = kAngularSpeed; break;
    case DriveCommand::Right: turn = -kAngularSpeed; break;
    case DriveCommand::ForwardLeft:
      advance = kLinearSpeed;
      turn = kAngularSpeed / 2.0;
      break;
    case DriveCommand::ForwardRight:
      advance = kLinearSpeed;
      turn = -kAngularSpeed / 2.0;
      break;
  }
  // Translate along the current heading, then rotate.
  s.pose.x += advance * dt_s * std::cos(s.pose.heading);
  s.pose.y += advance * dt_s * std::sin(s.pose.heading);
  s.pose.heading = normalize_angle(s.pose.heading + turn * dt_s);
  return s;
}

RoverState watchdog(RoverState s, std::int64_t now_ms, std::int64_t timeout_ms) {
  if (s.active_drive != DriveCommand::Stop && now_ms - s.last_command_ms > timeout_ms)
    s.active_drive = DriveCommand::Stop;
  return s;
}

}  // namespace sentry
