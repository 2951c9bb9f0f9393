#pragma once

#include <random>
#include <string>

#include "sentry/protocol.hpp"
#include "support.hpp"

namespace sentry::testing {

inline std::string random_utf8(std::mt19937_64& rng, std::size_t max_len) {
  static const char* pieces[] = {"a", "Z", "7", " ", "\xC3\xA9", "\xE2\x82\xAC", "\xF0\x9F\x94\x92", "#"};
  std::string s;
  const std::size_t n = rng() % (max_len + 1);
  for (std::size_t i = 0; i < n; ++i) s += pieces[rng() % 8];
  return s;
}

/// A well-formed message of the given type with a randomized payload.
inline proto::ControlMessage random_message(std::mt19937_64& rng, proto::MessageType t) {
  using proto::MessageType;
  switch (t) {
    case MessageType::Hello: return proto::hello(random_utf8(rng, 12));
    case MessageType::HelloOk: return proto::hello_ok();
    case MessageType::HelloErr: return proto::hello_err(random_utf8(rng, 6));
    case MessageType::Drive: return proto::drive(kAllDriveCommands[rng() % 7]);
    case MessageType::Aux: return proto::aux(kAllAuxCommands[rng() % 6]);
    case MessageType::ModeSet: return proto::mode_set(kAllModes[rng() % 4]);
    case MessageType::ModeOk: return proto::mode_ok(kAllModes[rng() % 4]);
    case MessageType::Frame:
    case MessageType::Snapshot: {
      const auto fmt = rng() % 2 ? PixelFormat::Rgb24 : PixelFormat::Gray8;
      Frame f = random_frame(rng, 1 + int(rng() % 12), 1 + int(rng() % 9), fmt);
      f.set_stamp(0, rng() % 100000);
      return t == MessageType::Frame ? proto::frame(f) : proto::snapshot(f);
    }
    case MessageType::SnapshotReq: return proto::snapshot_req();
    case MessageType::SetColorRef:
      return proto::set_color_ref({{std::uint8_t(rng()), std::uint8_t(rng()), std::uint8_t(rng())},
                                   int(rng() % 256)});
    case MessageType::AlarmEvent:
      return proto::alarm_event(std::uint32_t(rng()), double(rng() % 1000001) / 1e6);
    case MessageType::Disarm: return proto::disarm(random_utf8(rng, 10));
    case MessageType::Ping: return proto::ping();
    case MessageType::Pong: return proto::pong();
    case MessageType::DisarmResult: return proto::disarm_result(rng() % 2);
    case MessageType::Bye: return proto::bye();
  }
  return proto::ping();
}

inline proto::ControlMessage random_message(std::mt19937_64& rng) {
  return random_message(rng, proto::kAllMessageTypes[rng() % 17]);
}

}  // namespace sentry::testing
