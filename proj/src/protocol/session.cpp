#include <openssl/crypto.h>

#include "sentry/protocol.hpp"

namespace sentry::proto {

std::string_view to_string(SessionPhase p) {
  switch (p) {
    case SessionPhase::AwaitHello: return "AwaitHello";
    case SessionPhase::Ready: return "Ready";
    case SessionPhase::Closed: return "Closed";
  }
  return "?";
}

namespace {

bool secret_matches(std::string_view expected, std::span<const std::uint8_t> offered) {
  if (expected.size() != offered.size()) return false;
  return CRYPTO_memcmp(expected.data(), offered.data(), expected.size()) == 0;
}

SessionStep fail(SessionState s, std::string reason) {
  s.phase = SessionPhase::Closed;
  return SessionStep{s, {}, {}, ProtocolError{std::move(reason)}};
}

}  // namespace

SessionStep session_step(SessionState s, const ControlMessage& in, const SessionContext& ctx) {
  SessionStep out{s, {}, {}, std::nullopt};
  auto& st = out.state;

  if (st.phase == SessionPhase::Closed) return out;

  if (st.phase == SessionPhase::AwaitHello) {
    if (in.type == MessageType::Bye) {
      st.phase = SessionPhase::Closed;
      return out;
    }
    if (in.type != MessageType::Hello)
      return fail(st, std::string(to_string(in.type)) + " before HELLO");
    st.phase = SessionPhase::Closed;
    if (!secret_matches(ctx.shared_secret, in.payload)) {
      out.outgoing.push_back(hello_err("auth"));
    } else if (ctx.another_session_ready) {
      out.outgoing.push_back(hello_err("busy"));
    } else {
      st.phase = SessionPhase::Ready;
      st.authenticated = true;
      st.negotiated_mode = ctx.active_mode;
      out.outgoing.push_back(hello_ok());
    }
    return out;
  }

  // Ready
  switch (in.type) {
    case MessageType::Drive:
      out.actions.push_back(RoverAction{drive_payload(in)});
      break;
    case MessageType::Aux:
      out.actions.push_back(RoverAction{aux_payload(in)});
      break;
    case MessageType::ModeSet: {
      const Mode requested = mode_payload(in);
      auto t = mode_transition(ctx.active_mode, requested, ctx.alarm_phase);
      if (auto* ok = std::get_if<ModeTransition>(&t)) {
        out.actions = std::move(ok->teardown);
        out.actions.push_back(ModeChangeAction{ok->mode});
        st.negotiated_mode = ok->mode;
        out.outgoing.push_back(mode_ok(ok->mode));
      } else {
        // Refused: MODE_OK reports the mode that remains active.
        out.outgoing.push_back(mode_ok(ctx.active_mode));
      }
      break;
    }
    case MessageType::SnapshotReq:
      out.actions.push_back(SnapshotAction{});
      break;
    case MessageType::SetColorRef:
      out.actions.push_back(SetColorRefAction{color_ref_payload(in)});
      break;
    case MessageType::Disarm:
      out.actions.push_back(DisarmAction{text_payload(in)});
      break;
    case MessageType::Ping:
      out.outgoing.push_back(pong());
      break;
    case MessageType::Pong:
      break;
    case MessageType::Bye:
      st.phase = SessionPhase::Closed;
      break;
    default:
      return fail(st, std::string(to_string(in.type)) + " is not valid from a client");
  }
  return out;
}

std::variant<ModeTransition, ModeLocked> mode_transition(Mode current, Mode requested,
                                                         AlarmPhase alarm_phase) {
  if (current == requested) return ModeTransition{current, {}};
  if (current == Mode::MotionDetection && alarm_phase == AlarmPhase::Alarm)
    return ModeLocked{"alarm raised: disarm with the password before leaving MotionDetection"};
  ModeTransition t{requested, {}};
  if (is_drive_capable(current)) t.teardown.push_back(RoverAction{DriveCommand::Stop});
  return t;
}

}  // namespace sentry::proto
