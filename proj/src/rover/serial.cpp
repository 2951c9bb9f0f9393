#include <string>

#include "sentry/imaging.hpp"
#include "sentry/rover.hpp"

namespace sentry {

std::string_view to_string(PacketError e) {
  switch (e) {
    case PacketError::Sync: return "SyncError";
    case PacketError::Checksum: return "ChecksumError";
    case PacketError::UnknownCommand: return "UnknownCommand";
  }
  return "?";
}

SerialPacket encode_packet(const Command& cmd) {
  const std::uint8_t code = command_code(cmd);
  const std::uint8_t arg = 0x00;
  return {kPacketSync, code, arg, std::uint8_t(kPacketSync ^ code ^ arg)};
}

std::variant<Command, PacketError> decode_packet(
    std::span<const std::uint8_t, kPacketSize> bytes) {
  if (bytes[0] != kPacketSync) return PacketError::Sync;
  if ((bytes[0] ^ bytes[1] ^ bytes[2]) != bytes[3]) return PacketError::Checksum;
  // Argument byte is reserved and must be zero.
  if (bytes[2] != 0x00) return PacketError::UnknownCommand;
  if (auto cmd = command_from_code(bytes[1])) return *cmd;
  return PacketError::UnknownCommand;
}

std::variant<Command, PacketError> SerialLink::transmit(const Command& cmd) {
  const SerialPacket p = encode_packet(cmd);
  transcript_.insert(transcript_.end(), p.begin(), p.end());
  auto r = decode_packet(p);
  if (std::holds_alternative<PacketError>(r)) ++rejected_;
  return r;
}

std::variant<Command, PacketError> SerialLink::receive(
    std::span<const std::uint8_t, kPacketSize> bytes) {
  transcript_.insert(transcript_.end(), bytes.begin(), bytes.end());
  auto r = decode_packet(bytes);
  if (std::holds_alternative<PacketError>(r)) ++rejected_;
  return r;
}

void SerialLink::save_transcript(const std::filesystem::path& path) const {
  write_file_bytes(path, transcript_);
}

std::vector<Command> replay_transcript(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % kPacketSize != 0)
    throw ParseError("transcript length is not a multiple of 4", bytes.size());
  std::vector<Command> out;
  for (std::size_t at = 0; at < bytes.size(); at += kPacketSize) {
    auto r = decode_packet(bytes.subspan(at).first<kPacketSize>());
    if (const auto* err = std::get_if<PacketError>(&r))
      throw ParseError(std::string(to_string(*err)), at);
    out.push_back(std::get<Command>(r));
  }
  return out;
}

}  // namespace sentry
