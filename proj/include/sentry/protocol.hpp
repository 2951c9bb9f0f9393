#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sentry/commands.hpp"
#include "sentry/imaging.hpp"
#include "sentry/motion.hpp"
#include "sentry/tracker.hpp"

namespace sentry {

enum class Mode : std::uint8_t { PcControl = 0, InternetControl = 1, Tracing = 2, MotionDetection = 3 };

inline constexpr Mode kAllModes[] = {Mode::PcControl, Mode::InternetControl, Mode::Tracing,
                                     Mode::MotionDetection};

std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view name);
std::optional<Mode> mode_from_byte(std::uint8_t b);
/// Modes in which operator DRIVE commands reach the rover.
constexpr bool accepts_operator_drive(Mode m) {
  return m == Mode::PcControl || m == Mode::InternetControl;
}
/// Modes in which something (operator or tracker) drives the rover.
constexpr bool is_drive_capable(Mode m) { return m != Mode::MotionDetection; }

namespace proto {

inline constexpr std::uint16_t kDefaultPort = 8640;
inline constexpr std::size_t kHeaderSize = 5;
inline constexpr std::size_t kMaxPayload = 16u * 1024u * 1024u;
inline constexpr std::size_t kFrameHeaderSize = 13;

enum class MessageType : std::uint8_t {
  Hello = 0x01,
  HelloOk = 0x02,
  HelloErr = 0x03,
  Drive = 0x04,
  Aux = 0x05,
  ModeSet = 0x06,
  ModeOk = 0x07,
  Frame = 0x08,
  SnapshotReq = 0x09,
  Snapshot = 0x0A,
  SetColorRef = 0x0B,
  AlarmEvent = 0x0C,
  Disarm = 0x0D,
  Ping = 0x0E,
  Pong = 0x0F,
  DisarmResult = 0x10,
  Bye = 0x11,
};

inline constexpr MessageType kAllMessageTypes[] = {
    MessageType::Hello,       MessageType::HelloOk,      MessageType::HelloErr,
    MessageType::Drive,       MessageType::Aux,          MessageType::ModeSet,
    MessageType::ModeOk,      MessageType::Frame,        MessageType::SnapshotReq,
    MessageType::Snapshot,    MessageType::SetColorRef,  MessageType::AlarmEvent,
    MessageType::Disarm,      MessageType::Ping,         MessageType::Pong,
    MessageType::DisarmResult, MessageType::Bye,
};

std::string_view to_string(MessageType t);
std::optional<MessageType> message_type_from_byte(std::uint8_t b);

struct ControlMessage {
  MessageType type = MessageType::Ping;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const ControlMessage&, const ControlMessage&) = default;
};

class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Payload schema check. Returns the reason when `payload` is malformed for `type`.
std::optional<std::string> validate_payload(MessageType type, std::span<const std::uint8_t> payload);

// Framing: u32 big-endian payload length, u8 type tag, payload.
std::vector<std::uint8_t> encode_message(const ControlMessage& m);

struct Decoded {
  ControlMessage message;
  std::size_t consumed = 0;
};
struct NeedMore {
  std::size_t total_needed = 0;  // bytes required before the next attempt can succeed
};
struct ProtocolError {
  std::string reason;
};
using DecodeResult = std::variant<Decoded, NeedMore, ProtocolError>;

DecodeResult decode_message(std::span<const std::uint8_t> bytes);

/// Accumulates a byte stream and yields complete messages in order.
class MessageReader {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  /// Next message, NeedMore, or the protocol error that poisoned the stream.
  std::variant<ControlMessage, NeedMore, ProtocolError> next();
  std::size_t buffered() const noexcept { return buffer_.size() - read_pos_; }

 private:
  std::vector<std::uint8_t> buffer_;
  std::size_t read_pos_ = 0;
  std::optional<ProtocolError> failed_;
};

// ---- typed constructors -----------------------------------------------------

ControlMessage hello(std::string_view secret);
ControlMessage hello_ok();
ControlMessage hello_err(std::string_view reason);
ControlMessage drive(DriveCommand cmd);
ControlMessage aux(AuxCommand cmd);
ControlMessage mode_set(Mode m);
ControlMessage mode_ok(Mode m);
ControlMessage frame(const sentry::Frame& f);
ControlMessage snapshot_req();
ControlMessage snapshot(const sentry::Frame& f);
ControlMessage set_color_ref(const ColorReference& ref);
ControlMessage alarm_event(std::uint32_t seq, double ratio);
ControlMessage disarm(std::string_view password);
ControlMessage disarm_result(bool ok);
ControlMessage ping();
ControlMessage pong();
ControlMessage bye();

// ---- typed accessors (payload assumed validated) ---------------------------

std::string text_payload(const ControlMessage& m);
DriveCommand drive_payload(const ControlMessage& m);
AuxCommand aux_payload(const ControlMessage& m);
Mode mode_payload(const ControlMessage& m);
sentry::Frame frame_payload(const ControlMessage& m);
ColorReference color_ref_payload(const ControlMessage& m);
bool disarm_result_payload(const ControlMessage& m);
struct AlarmEventInfo {
  std::uint32_t seq = 0;
  std::uint32_t ratio_ppm = 0;
};
AlarmEventInfo alarm_event_payload(const ControlMessage& m);

// ---- session state machine --------------------------------------------------

enum class SessionPhase : std::uint8_t { AwaitHello, Ready, Closed };
std::string_view to_string(SessionPhase p);

struct SessionState {
  SessionPhase phase = SessionPhase::AwaitHello;
  bool authenticated = false;
  Mode negotiated_mode = Mode::PcControl;
};

struct RoverAction {
  Command command;
  friend bool operator==(const RoverAction&, const RoverAction&) = default;
};
struct ModeChangeAction {
  Mode mode;
  friend bool operator==(const ModeChangeAction&, const ModeChangeAction&) = default;
};
struct SnapshotAction {
  friend bool operator==(const SnapshotAction&, const SnapshotAction&) = default;
};
struct DisarmAction {
  std::string password;
  friend bool operator==(const DisarmAction&, const DisarmAction&) = default;
};
struct SetColorRefAction {
  ColorReference ref;
  friend bool operator==(const SetColorRefAction& a, const SetColorRefAction& b) {
    return a.ref.rgb == b.ref.rgb && a.ref.tolerance == b.ref.tolerance;
  }
};

using Action =
    std::variant<RoverAction, ModeChangeAction, SnapshotAction, DisarmAction, SetColorRefAction>;

/// What the session needs to know about the rest of the control centre.
struct SessionContext {
  std::string_view shared_secret;
  bool another_session_ready = false;
  Mode active_mode = Mode::PcControl;
  AlarmPhase alarm_phase = AlarmPhase::Idle;
};

struct SessionStep {
  SessionState state;
  std::vector<ControlMessage> outgoing;
  std::vector<Action> actions;
  std::optional<ProtocolError> error;
};

SessionStep session_step(SessionState s, const ControlMessage& incoming, const SessionContext& ctx);

// ---- mode selection ---------------------------------------------------------

struct ModeTransition {
  Mode mode;
  std::vector<Action> teardown;
};
struct ModeLocked {
  std::string reason;
};

std::variant<ModeTransition, ModeLocked> mode_transition(Mode current, Mode requested,
                                                         AlarmPhase alarm_phase);

}  // namespace proto
}  // namespace sentry
