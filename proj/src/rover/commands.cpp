#include "sentry/commands.hpp"

namespace sentry {

std::uint8_t command_code(const Command& cmd) {
  return std::visit([](auto c) { return static_cast<std::uint8_t>(c); }, cmd);
}

std::optional<DriveCommand> drive_from_code(std::uint8_t code) {
  if (code >= 0x01 && code <= 0x07) return static_cast<DriveCommand>(code);
  return std::nullopt;
}

std::optional<AuxCommand> aux_from_code(std::uint8_t code) {
  if (code >= 0x10 && code <= 0x15) return static_cast<AuxCommand>(code);
  return std::nullopt;
}

std::optional<Command> command_from_code(std::uint8_t code) {
  if (auto d = drive_from_code(code)) return Command{*d};
  if (auto a = aux_from_code(code)) return Command{*a};
  return std::nullopt;
}

std::string_view to_string(DriveCommand cmd) {
  switch (cmd) {
    case DriveCommand::Forward: return "Forward";
    case DriveCommand::Backward: return "Backward";
    case DriveCommand::Left: return "Left";
    case DriveCommand::Right: return "Right";
    case DriveCommand::ForwardLeft: return "ForwardLeft";
    case DriveCommand::ForwardRight: return "ForwardRight";
    case DriveCommand::Stop: return "Stop";
  }
  return "?";
}

std::string_view to_string(AuxCommand cmd) {
  switch (cmd) {
    case AuxCommand::LightsOn: return "LightsOn";
    case AuxCommand::LightsOff: return "LightsOff";
    case AuxCommand::NightVisionOn: return "NightVisionOn";
    case AuxCommand::NightVisionOff: return "NightVisionOff";
    case AuxCommand::CameraStart: return "CameraStart";
    case AuxCommand::CameraStop: return "CameraStop";
  }
  return "?";
}

std::string_view to_string(const Command& cmd) {
  return std::visit([](auto c) { return to_string(c); }, cmd);
}

std::optional<DriveCommand> parse_drive(std::string_view name) {
  for (auto d : kAllDriveCommands)
    if (to_string(d) == name) return d;
  return std::nullopt;
}

}  // namespace sentry
