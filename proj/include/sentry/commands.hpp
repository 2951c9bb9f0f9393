#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

namespace sentry {

// Byte values double as the serial/protocol command codes.
enum class DriveCommand : std::uint8_t {
  Forward = 0x01,
  Backward = 0x02,
  Left = 0x03,
  Right = 0x04,
  ForwardLeft = 0x05,
  ForwardRight = 0x06,
  Stop = 0x07,
};

enum class AuxCommand : std::uint8_t {
  LightsOn = 0x10,
  LightsOff = 0x11,
  NightVisionOn = 0x12,
  NightVisionOff = 0x13,
  CameraStart = 0x14,
  CameraStop = 0x15,
};

using Command = std::variant<DriveCommand, AuxCommand>;

inline constexpr DriveCommand kAllDriveCommands[] = {
    DriveCommand::Forward,     DriveCommand::Backward,     DriveCommand::Left,
    DriveCommand::Right,       DriveCommand::ForwardLeft,  DriveCommand::ForwardRight,
    DriveCommand::Stop,
};

inline constexpr AuxCommand kAllAuxCommands[] = {
    AuxCommand::LightsOn,      AuxCommand::LightsOff,  AuxCommand::NightVisionOn,
    AuxCommand::NightVisionOff, AuxCommand::CameraStart, AuxCommand::CameraStop,
};

std::uint8_t command_code(const Command& cmd);
std::optional<DriveCommand> drive_from_code(std::uint8_t code);
std::optional<AuxCommand> aux_from_code(std::uint8_t code);
std::optional<Command> command_from_code(std::uint8_t code);

std::string_view to_string(DriveCommand cmd);
std::string_view to_string(AuxCommand cmd);
std::string_view to_string(const Command& cmd);
std::optional<DriveCommand> parse_drive(std::string_view name);

}  // namespace sentry
