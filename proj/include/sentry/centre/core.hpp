#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "sentry/centre/batch.hpp"
#include "sentry/centre/config.hpp"
#include "sentry/centre/report.hpp"
#include "sentry/motion.hpp"
#include "sentry/protocol.hpp"
#include "sentry/rover.hpp"
#include "sentry/tracker.hpp"

namespace sentry::centre {

/// Per-session outgoing messages. Control messages are never dropped; video
/// frames keep only the newest kFrameDepth.
class OutboundQueue {
 public:
  static constexpr std::size_t kFrameDepth = 4;

  void push_control(proto::ControlMessage m) { control_.push_back(std::move(m)); }
  void push_frame(proto::ControlMessage m);

  /// Control messages first, then the oldest queued frame.
  std::optional<proto::ControlMessage> pop();
  bool empty() const noexcept { return control_.empty() && frames_.empty(); }
  std::size_t control_size() const noexcept { return control_.size(); }
  std::size_t frame_size() const noexcept { return frames_.size(); }
  std::size_t dropped_frames() const noexcept { return dropped_; }
  void clear_frames() { frames_.clear(); }

 private:
  std::deque<proto::ControlMessage> control_;
  std::deque<proto::ControlMessage> frames_;
  std::size_t dropped_ = 0;
};

/// Streams frames into an SRSEQ1 file; the count is patched on finish.
class Recorder {
 public:
  explicit Recorder(const std::filesystem::path& path);
  ~Recorder();
  Recorder(const Recorder&) = delete;
  Recorder& operator=(const Recorder&) = delete;

  void append(const Frame& f);
  void finish();
  std::uint32_t count() const noexcept { return count_; }

 private:
  std::ofstream out_;
  std::optional<Frame> shape_;
  std::uint64_t last_seq_ = 0;
  std::uint32_t count_ = 0;
  bool finished_ = false;
};

/// Where frames come from: the simulator renders the scene from the rover's
/// pose; replay cycles through a recorded sequence.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  /// Next frame, or nullopt when the camera is off.
  virtual std::optional<Frame> capture(const RoverState& rover) = 0;
};

class SimulatedCamera : public FrameSource {
 public:
  explicit SimulatedCamera(SimScene scene) : sim_(std::move(scene)) {}
  std::optional<Frame> capture(const RoverState& rover) override;
  const SimScene& scene() const noexcept { return sim_; }

 private:
  SimScene sim_;
};

class ReplayCamera : public FrameSource {
 public:
  explicit ReplayCamera(FrameSequence seq);
  std::optional<Frame> capture(const RoverState& rover) override;

 private:
  FrameSequence seq_;
  std::size_t next_ = 0;
};

using SessionId = std::uint64_t;

/// The control centre without transport: session registry, mode state, the
/// detector and tracker, the rover behind its serial link, and per-session
/// outbound queues. Time is supplied by the caller in milliseconds.
class Centre {
 public:
  Centre(CentreConfig cfg, std::unique_ptr<FrameSource> source, RoverState rover = {});

  /// Builds the frame source named by the config.
  static Centre from_config(const CentreConfig& cfg);

  SessionId open_session();
  /// Drives the session's state machine and applies its actions. Replies
  /// are queued on the session. Returns false once the session is closed;
  /// the caller drains the queue and then calls close_session.
  bool receive(SessionId id, const proto::ControlMessage& m, std::int64_t now_ms);
  /// Protocol error detected by the transport's decoder.
  void fail_session(SessionId id);
  void close_session(SessionId id);

  OutboundQueue& outbound(SessionId id);
  bool session_open(SessionId id) const;
  std::optional<proto::SessionState> session_state(SessionId id) const;
  std::size_t session_count() const noexcept { return sessions_.size(); }

  /// One frame period: watchdog, capture, mode processing, frame push, then
  /// the rover moves by one period.
  void tick(std::int64_t now_ms);

  void start_recording(const std::filesystem::path& path);
  void stop_recording();

  Mode mode() const noexcept { return mode_; }
  AlarmPhase alarm_phase() const noexcept { return alarm_.phase; }
  const RoverState& rover() const noexcept { return rover_; }
  const SerialLink& link() const noexcept { return link_; }
  const ColorReference& color() const noexcept { return cfg_.color; }
  const CentreConfig& config() const noexcept { return cfg_; }
  std::uint64_t frames_captured() const noexcept { return captured_; }
  std::size_t dropped_drives() const noexcept { return dropped_drives_; }
  std::optional<Frame> last_frame() const { return last_frame_; }

  /// Every processed frame is also reported here when set.
  std::function<void(const FrameRecord&)> on_record;

 private:
  struct Session {
    proto::SessionState state;
    OutboundQueue queue;
  };

  void apply(SessionId id, const proto::Action& a, bool teardown, std::int64_t now_ms);
  void dispatch(const Command& cmd, std::int64_t now_ms);
  void set_mode(Mode m);
  std::optional<SessionId> ready_session() const;
  void broadcast_control(const proto::ControlMessage& m);

  CentreConfig cfg_;
  std::unique_ptr<FrameSource> source_;
  RoverState rover_;
  SerialLink link_;
  Mode mode_;
  AlarmState alarm_;
  FrameWindow window_;
  std::optional<Frame> last_frame_;
  std::unique_ptr<Recorder> recorder_;
  std::map<SessionId, Session> sessions_;
  SessionId next_id_ = 1;
  std::uint64_t captured_ = 0;
  std::size_t dropped_drives_ = 0;
};

}  // namespace sentry::centre
