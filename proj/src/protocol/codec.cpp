#include <string>

#include "sentry/protocol.hpp"

namespace sentry {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::PcControl: return "PcControl";
    case Mode::InternetControl: return "InternetControl";
    case Mode::Tracing: return "Tracing";
    case Mode::MotionDetection: return "MotionDetection";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (auto m : kAllModes)
    if (to_string(m) == name) return m;
  return std::nullopt;
}

std::optional<Mode> mode_from_byte(std::uint8_t b) {
  if (b <= 3) return static_cast<Mode>(b);
  return std::nullopt;
}

namespace proto {

std::string_view to_string(MessageType t) {
  switch (t) {
    case MessageType::Hello: return "HELLO";
    case MessageType::HelloOk: return "HELLO_OK";
    case MessageType::HelloErr: return "HELLO_ERR";
    case MessageType::Drive: return "DRIVE";
    case MessageType::Aux: return "AUX";
    case MessageType::ModeSet: return "MODE_SET";
    case MessageType::ModeOk: return "MODE_OK";
    case MessageType::Frame: return "FRAME";
    case MessageType::SnapshotReq: return "SNAPSHOT_REQ";
    case MessageType::Snapshot: return "SNAPSHOT";
    case MessageType::SetColorRef: return "SET_COLOR_REF";
    case MessageType::AlarmEvent: return "ALARM_EVENT";
    case MessageType::Disarm: return "DISARM";
    case MessageType::Ping: return "PING";
    case MessageType::Pong: return "PONG";
    case MessageType::DisarmResult: return "DISARM_RESULT";
    case MessageType::Bye: return "BYE";
  }
  return "?";
}

std::optional<MessageType> message_type_from_byte(std::uint8_t b) {
  if (b >= 0x01 && b <= 0x11) return static_cast<MessageType>(b);
  return std::nullopt;
}

namespace {

std::uint32_t get_be32(std::span<const std::uint8_t> b, std::size_t at) {
  return std::uint32_t(b[at]) << 24 | std::uint32_t(b[at + 1]) << 16 |
         std::uint32_t(b[at + 2]) << 8 | std::uint32_t(b[at + 3]);
}

bool valid_utf8(std::span<const std::uint8_t> s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const std::uint8_t c = s[i];
    std::size_t extra;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      if ((s[i + k] & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (s[i + k] & 0x3F);
    }
    // Reject overlong forms, surrogates and out-of-range code points.
    static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

std::optional<std::string> expect_size(std::span<const std::uint8_t> p, std::size_t n) {
  if (p.size() != n)
    return "payload must be " + std::to_string(n) + " bytes, got " + std::to_string(p.size());
  return std::nullopt;
}

std::optional<std::string> validate_frame(std::span<const std::uint8_t> p) {
  if (p.size() < kFrameHeaderSize) return "frame payload shorter than its header";
  const std::uint64_t w = get_be32(p, 0);
  const std::uint64_t h = get_be32(p, 4);
  const std::uint8_t fmt = p[8];
  if (fmt > 1) return "unknown frame pixel format";
  if (w == 0 || h == 0) return "zero frame dimension";
  const std::uint64_t need = w * h * (fmt == 0 ? 1u : 3u);
  if (need != p.size() - kFrameHeaderSize) return "frame payload length does not match header";
  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_payload(MessageType type, std::span<const std::uint8_t> p) {
  switch (type) {
    case MessageType::Hello:
    case MessageType::HelloErr:
    case MessageType::Disarm:
      if (!valid_utf8(p)) return "payload is not valid UTF-8";
      return std::nullopt;
    case MessageType::HelloOk:
    case MessageType::SnapshotReq:
    case MessageType::Ping:
    case MessageType::Pong:
    case MessageType::Bye:
      return expect_size(p, 0);
    case MessageType::Drive:
      if (auto e = expect_size(p, 1)) return e;
      if (!drive_from_code(p[0])) return "unknown drive command byte";
      return std::nullopt;
    case MessageType::Aux:
      if (auto e = expect_size(p, 1)) return e;
      if (!aux_from_code(p[0])) return "unknown aux command byte";
      return std::nullopt;
    case MessageType::ModeSet:
    case MessageType::ModeOk:
      if (auto e = expect_size(p, 1)) return e;
      if (!mode_from_byte(p[0])) return "unknown mode byte";
      return std::nullopt;
    case MessageType::Frame:
    case MessageType::Snapshot:
      return validate_frame(p);
    case MessageType::SetColorRef:
      return expect_size(p, 4);
    case MessageType::AlarmEvent:
      return expect_size(p, 8);
    case MessageType::DisarmResult:
      if (auto e = expect_size(p, 1)) return e;
      if (p[0] > 1) return "disarm result must be 0 or 1";
      return std::nullopt;
  }
  return "unknown message type";
}

std::vector<std::uint8_t> encode_message(const ControlMessage& m) {
  if (m.payload.size() > kMaxPayload) throw ProtocolViolation("payload exceeds 16 MiB");
  const auto n = std::uint32_t(m.payload.size());
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + m.payload.size());
  out.push_back(std::uint8_t(n >> 24));
  out.push_back(std::uint8_t(n >> 16));
  out.push_back(std::uint8_t(n >> 8));
  out.push_back(std::uint8_t(n));
  out.push_back(static_cast<std::uint8_t>(m.type));
  out.insert(out.end(), m.payload.begin(), m.payload.end());
  return out;
}

DecodeResult decode_message(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) return NeedMore{kHeaderSize};
  const std::uint32_t len = get_be32(bytes, 0);
  if (len > kMaxPayload)
    return ProtocolError{"declared payload length " + std::to_string(len) + " exceeds 16 MiB"};
  if (bytes.size() < kHeaderSize) return NeedMore{kHeaderSize};
  const auto type = message_type_from_byte(bytes[4]);
  if (!type) return ProtocolError{"unknown type tag " + std::to_string(bytes[4])};
  const std::size_t total = kHeaderSize + len;
  if (bytes.size() < total) return NeedMore{total};
  auto payload = bytes.subspan(kHeaderSize, len);
  if (auto err = validate_payload(*type, payload))
    return ProtocolError{std::string(to_string(*type)) + ": " + *err};
  return Decoded{ControlMessage{*type, {payload.begin(), payload.end()}}, total};
}

void MessageReader::feed(std::span<const std::uint8_t> bytes) {
  if (read_pos_ > 0 && read_pos_ == buffer_.size()) {
    buffer_.clear();
    read_pos_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::variant<ControlMessage, NeedMore, ProtocolError> MessageReader::next() {
  if (failed_) return *failed_;
  auto r = decode_message(std::span(buffer_).subspan(read_pos_));
  if (auto* d = std::get_if<Decoded>(&r)) {
    read_pos_ += d->consumed;
    // Compact once the consumed prefix dominates the buffer.
    if (read_pos_ > 65536 && read_pos_ * 2 > buffer_.size()) {
      buffer_.erase(buffer_.begin(), buffer_.begin() + std::ptrdiff_t(read_pos_));
      read_pos_ = 0;
    }
    return std::move(d->message);
  }
  if (auto* e = std::get_if<ProtocolError>(&r)) {
    failed_ = *e;
    return *e;
  }
  return std::get<NeedMore>(r);
}

}  // namespace proto
}  // namespace sentry
