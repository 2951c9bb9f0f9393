#include <algorithm>
#include <cmath>

#include "sentry/protocol.hpp"

namespace sentry::proto {

namespace {

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v >> 24));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v));
}

std::uint32_t get_be32(std::span<const std::uint8_t> b, std::size_t at) {
  return std::uint32_t(b[at]) << 24 | std::uint32_t(b[at + 1]) << 16 |
         std::uint32_t(b[at + 2]) << 8 | std::uint32_t(b[at + 3]);
}

ControlMessage text_message(MessageType t, std::string_view text) {
  return {t, std::vector<std::uint8_t>(text.begin(), text.end())};
}

ControlMessage byte_message(MessageType t, std::uint8_t b) { return {t, {b}}; }

ControlMessage frame_message(MessageType t, const sentry::Frame& f) {
  ControlMessage m{t, {}};
  m.payload.reserve(kFrameHeaderSize + f.byte_size());
  put_be32(m.payload, std::uint32_t(f.width()));
  put_be32(m.payload, std::uint32_t(f.height()));
  m.payload.push_back(static_cast<std::uint8_t>(f.format()));
  put_be32(m.payload, std::uint32_t(f.seq()));
  m.payload.insert(m.payload.end(), f.data().begin(), f.data().end());
  return m;
}

void expect_type(const ControlMessage& m, std::initializer_list<MessageType> types) {
  if (std::find(types.begin(), types.end(), m.type) == types.end())
    throw ProtocolViolation("unexpected message type " + std::string(to_string(m.type)));
}

}  // namespace

ControlMessage hello(std::string_view secret) { return text_message(MessageType::Hello, secret); }
ControlMessage hello_ok() { return {MessageType::HelloOk, {}}; }
ControlMessage hello_err(std::string_view reason) {
  return text_message(MessageType::HelloErr, reason);
}
ControlMessage drive(DriveCommand cmd) {
  return byte_message(MessageType::Drive, static_cast<std::uint8_t>(cmd));
}
ControlMessage aux(AuxCommand cmd) {
  return byte_message(MessageType::Aux, static_cast<std::uint8_t>(cmd));
}
ControlMessage mode_set(Mode m) {
  return byte_message(MessageType::ModeSet, static_cast<std::uint8_t>(m));
}
ControlMessage mode_ok(Mode m) {
  return byte_message(MessageType::ModeOk, static_cast<std::uint8_t>(m));
}
ControlMessage frame(const sentry::Frame& f) { return frame_message(MessageType::Frame, f); }
ControlMessage snapshot_req() { return {MessageType::SnapshotReq, {}}; }
ControlMessage snapshot(const sentry::Frame& f) { return frame_message(MessageType::Snapshot, f); }
ControlMessage set_color_ref(const ColorReference& ref) {
  return {MessageType::SetColorRef,
          {ref.rgb[0], ref.rgb[1], ref.rgb[2], std::uint8_t(std::clamp(ref.tolerance, 0, 255))}};
}
ControlMessage alarm_event(std::uint32_t seq, double ratio) {
  ControlMessage m{MessageType::AlarmEvent, {}};
  put_be32(m.payload, seq);
  put_be32(m.payload, std::uint32_t(std::lround(std::clamp(ratio, 0.0, 1.0) * 1e6)));
  return m;
}
ControlMessage disarm(std::string_view password) {
  return text_message(MessageType::Disarm, password);
}
ControlMessage disarm_result(bool ok) {
  return byte_message(MessageType::DisarmResult, ok ? 1 : 0);
}
ControlMessage ping() { return {MessageType::Ping, {}}; }
ControlMessage pong() { return {MessageType::Pong, {}}; }
ControlMessage bye() { return {MessageType::Bye, {}}; }

std::string text_payload(const ControlMessage& m) {
  expect_type(m, {MessageType::Hello, MessageType::HelloErr, MessageType::Disarm});
  return {m.payload.begin(), m.payload.end()};
}

DriveCommand drive_payload(const ControlMessage& m) {
  expect_type(m, {MessageType::Drive});
  return *drive_from_code(m.payload.at(0));
}

AuxCommand aux_payload(const ControlMessage& m) {
  expect_type(m, {MessageType::Aux});
  return *aux_from_code(m.payload.at(0));
}

Mode mode_payload(const ControlMessage& m) {
  expect_type(m, {MessageType::ModeSet, MessageType::ModeOk});
  return *mode_from_byte(m.payload.at(0));
}

sentry::Frame frame_payload(const ControlMessage& m) {
  expect_type(m, {MessageType::Frame, MessageType::Snapshot});
  if (auto err = validate_payload(m.type, m.payload)) throw ProtocolViolation(*err);
  const auto w = get_be32(m.payload, 0);
  const auto h = get_be32(m.payload, 4);
  const auto fmt = PixelFormat(m.payload[8]);
  const auto seq = get_be32(m.payload, 9);
  std::vector<std::uint8_t> data(m.payload.begin() + kFrameHeaderSize, m.payload.end());
  return sentry::Frame(int(w), int(h), fmt, std::move(data), 0, seq);
}

ColorReference color_ref_payload(const ControlMessage& m) {
  expect_type(m, {MessageType::SetColorRef});
  return ColorReference{{m.payload.at(0), m.payload.at(1), m.payload.at(2)}, m.payload.at(3)};
}

bool disarm_result_payload(const ControlMessage& m) {
  expect_type(m, {MessageType::DisarmResult});
  return m.payload.at(0) == 1;
}

AlarmEventInfo alarm_event_payload(const ControlMessage& m) {
  expect_type(m, {MessageType::AlarmEvent});
  if (m.payload.size() != 8) throw ProtocolViolation("ALARM_EVENT payload must be 8 bytes");
  return {get_be32(m.payload, 0), get_be32(m.payload, 4)};
}

}  // namespace sentry::proto
