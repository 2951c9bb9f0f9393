#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "sentry/commands.hpp"
#include "sentry/errors.hpp"
#include "sentry/geometry.hpp"

namespace sentry {

inline constexpr double kLinearSpeed = 0.5;   // m/s
inline constexpr double kAngularSpeed = 1.0;  // rad/s
inline constexpr std::int64_t kDefaultWatchdogMs = 2000;

struct RoverState {
  Pose pose;
  bool lights = false;
  bool night_vision = false;
  bool camera_on = true;
  DriveCommand active_drive = DriveCommand::Stop;
  std::int64_t last_command_ms = 0;

  friend bool operator==(const RoverState&, const RoverState&) = default;
};

/// Latches drive commands (and their time); sets aux flags. Never moves.
RoverState apply_command(RoverState s, const Command& cmd, std::int64_t now_ms);

/// Advances the pose by `dt_s` seconds under the active drive command.
RoverState step(RoverState s, double dt_s);

RoverState watchdog(RoverState s, std::int64_t now_ms,
                    std::int64_t timeout_ms = kDefaultWatchdogMs);

// ---- serial link ----------------------------------------------------------

inline constexpr std::uint8_t kPacketSync = 0xA5;
inline constexpr std::size_t kPacketSize = 4;

using SerialPacket = std::array<std::uint8_t, kPacketSize>;

enum class PacketError : std::uint8_t { Sync, Checksum, UnknownCommand };
std::string_view to_string(PacketError e);

SerialPacket encode_packet(const Command& cmd);
std::variant<Command, PacketError> decode_packet(std::span<const std::uint8_t, kPacketSize> bytes);

/// Host-to-rover byte channel. Every command is encoded, appended to the
/// transcript, and decoded again on the rover side before it takes effect.
class SerialLink {
 public:
  std::variant<Command, PacketError> transmit(const Command& cmd);
  /// Feeds raw bytes as received by the rover (used for replay of transcripts).
  std::variant<Command, PacketError> receive(std::span<const std::uint8_t, kPacketSize> bytes);

  std::span<const std::uint8_t> transcript() const noexcept { return transcript_; }
  std::size_t packets() const noexcept { return transcript_.size() / kPacketSize; }
  std::size_t rejected() const noexcept { return rejected_; }
  void save_transcript(const std::filesystem::path& path) const;

 private:
  std::vector<std::uint8_t> transcript_;
  std::size_t rejected_ = 0;
};

/// Decodes a transcript byte stream into commands; throws on any bad packet.
std::vector<Command> replay_transcript(std::span<const std::uint8_t> bytes);

}  // namespace sentry
