#include "sentry/centre/core.hpp"

#include <algorithm>

#include "sentry/centre/scene_directives.hpp"

namespace sentry::centre {

// ---- OutboundQueue ----------------------------------------------------------

void OutboundQueue::push_frame(proto::ControlMessage m) {
  if (frames_.size() == kFrameDepth) {
    frames_.pop_front();
    ++dropped_;
  }
  frames_.push_back(std::move(m));
}

std::optional<proto::ControlMessage> OutboundQueue::pop() {
  auto& lane = !control_.empty() ? control_ : frames_;
  if (lane.empty()) return std::nullopt;
  proto::ControlMessage m = std::move(lane.front());
  lane.pop_front();
  return m;
}

// ---- Recorder ---------------------------------------------------------------

namespace {

constexpr std::streamoff kCountOffset = 15;

template <typename T>
void write_le(std::ofstream& out, T v) {
  char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = char(std::uint8_t(v >> (8 * i)));
  out.write(buf, sizeof buf);
}

void write_header(std::ofstream& out, std::uint32_t w, std::uint32_t h, PixelFormat fmt,
                  std::uint32_t count) {
  out.write("SRSEQ1", 6);
  write_le<std::uint32_t>(out, w);
  write_le<std::uint32_t>(out, h);
  out.put(char(fmt));
  write_le<std::uint32_t>(out, count);
}

}  // namespace

Recorder::Recorder(const std::filesystem::path& path)
    : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw std::ios_base::failure("cannot create " + path.string());
}

Recorder::~Recorder() {
  try {
    finish();
  } catch (...) {
  }
}

void Recorder::append(const Frame& f) {
  if (finished_) throw StateError("recording already finished");
  if (!shape_) {
    write_header(out_, std::uint32_t(f.width()), std::uint32_t(f.height()), f.format(), 0);
    shape_ = Frame(f.width(), f.height(), f.format());
  } else if (!f.same_shape(*shape_)) {
    throw DimensionMismatch("recorded frames must keep one shape");
  } else if (f.seq() <= last_seq_) {
    throw ParameterError("recorded frames need increasing seq");
  }
  write_le<std::uint64_t>(out_, f.timestamp_ms());
  write_le<std::uint64_t>(out_, f.seq());
  out_.write(reinterpret_cast<const char*>(f.data().data()), std::streamsize(f.byte_size()));
  if (!out_) throw std::ios_base::failure("recording write failed");
  last_seq_ = f.seq();
  ++count_;
}

void Recorder::finish() {
  if (finished_) return;
  finished_ = true;
  if (!shape_) {
    write_header(out_, 0, 0, PixelFormat::Gray8, 0);
  } else {
    out_.seekp(kCountOffset);
    write_le<std::uint32_t>(out_, count_);
  }
  out_.close();
  if (out_.fail()) throw std::ios_base::failure("recording close failed");
}

// ---- frame sources ------------------------------------------------------------

std::optional<Frame> SimulatedCamera::capture(const RoverState& rover) {
  if (!rover.camera_on) return std::nullopt;
  return render_scene(sim_.scene, rover.pose, sim_.width, sim_.height,
                      {rover.lights, rover.night_vision});
}

ReplayCamera::ReplayCamera(FrameSequence seq) : seq_(std::move(seq)) {
  if (seq_.empty()) throw ParameterError("replay sequence is empty");
}

std::optional<Frame> ReplayCamera::capture(const RoverState& rover) {
  if (!rover.camera_on) return std::nullopt;
  Frame f = seq_[next_];
  next_ = (next_ + 1) % seq_.size();
  return f;
}

// ---- Centre -----------------------------------------------------------------------

Centre::Centre(CentreConfig cfg, std::unique_ptr<FrameSource> source, RoverState rover)
    : cfg_(std::move(cfg)),
      source_(std::move(source)),
      rover_(rover),
      mode_(Mode::PcControl),
      alarm_(AlarmState::idle(cfg_.alarm_password)) {
  if (!source_) throw ParameterError("centre needs a frame source");
  set_mode(cfg_.initial_mode);
}

Centre Centre::from_config(const CentreConfig& cfg) {
  cfg.validate();
  if (cfg.scene_file) {
    SimScene sim = load_scene(*cfg.scene_file);
    RoverState rover = sim.rover;
    return Centre(cfg, std::make_unique<SimulatedCamera>(std::move(sim)), rover);
  }
  return Centre(cfg, std::make_unique<ReplayCamera>(load_sequence(*cfg.sequence_file)));
}

SessionId Centre::open_session() {
  const SessionId id = next_id_++;
  sessions_.emplace(id, Session{});
  return id;
}

bool Centre::session_open(SessionId id) const {
  const auto it = sessions_.find(id);
  return it != sessions_.end() && it->second.state.phase != proto::SessionPhase::Closed;
}

std::optional<proto::SessionState> Centre::session_state(SessionId id) const {
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) return std::nullopt;
  return it->second.state;
}

OutboundQueue& Centre::outbound(SessionId id) {
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ParameterError("unknown session " + std::to_string(id));
  return it->second.queue;
}

std::optional<SessionId> Centre::ready_session() const {
  for (const auto& [id, s] : sessions_)
    if (s.state.phase == proto::SessionPhase::Ready) return id;
  return std::nullopt;
}

bool Centre::receive(SessionId id, const proto::ControlMessage& m, std::int64_t now_ms) {
  const auto it = sessions_.find(id);
  if (it == sessions_.end() || it->second.state.phase == proto::SessionPhase::Closed) return false;

  const auto ready = ready_session();
  const proto::SessionContext ctx{cfg_.shared_secret, ready.has_value() && *ready != id, mode_,
                                  alarm_.phase};
  auto st = proto::session_step(it->second.state, m, ctx);
  it->second.state = st.state;
  for (auto& out : st.outgoing) it->second.queue.push_control(std::move(out));
  if (st.state.phase == proto::SessionPhase::Closed) it->second.queue.clear_frames();

  // RoverActions produced by MODE_SET are mode teardown, not operator drive.
  const bool teardown = m.type == proto::MessageType::ModeSet;
  for (const auto& a : st.actions) apply(id, a, teardown, now_ms);
  return st.state.phase != proto::SessionPhase::Closed;
}

void Centre::fail_session(SessionId id) {
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) return;
  it->second.state.phase = proto::SessionPhase::Closed;
  it->second.queue.clear_frames();
}

void Centre::close_session(SessionId id) { sessions_.erase(id); }

void Centre::apply(SessionId id, const proto::Action& a, bool teardown, std::int64_t now_ms) {
  auto& queue = sessions_.at(id).queue;
  if (const auto* r = std::get_if<proto::RoverAction>(&a)) {
    const bool is_drive = std::holds_alternative<DriveCommand>(r->command);
    if (is_drive && !teardown && !accepts_operator_drive(mode_)) {
      ++dropped_drives_;
      return;
    }
    dispatch(r->command, now_ms);
  } else if (const auto* mc = std::get_if<proto::ModeChangeAction>(&a)) {
    set_mode(mc->mode);
  } else if (std::holds_alternative<proto::SnapshotAction>(a)) {
    if (last_frame_) queue.push_control(proto::snapshot(*last_frame_));
  } else if (const auto* d = std::get_if<proto::DisarmAction>(&a)) {
    bool ok = false;
    if (alarm_.phase != AlarmPhase::Idle) {
      auto outcome = disarm(alarm_, d->password);
      if (auto* next = std::get_if<AlarmState>(&outcome)) {
        alarm_ = std::move(*next);
        ok = true;
      }
    }
    queue.push_control(proto::disarm_result(ok));
  } else if (const auto* c = std::get_if<proto::SetColorRefAction>(&a)) {
    cfg_.color = c->ref;
  }
}

void Centre::dispatch(const Command& cmd, std::int64_t now_ms) {
  const auto decoded = link_.transmit(cmd);
  if (const auto* c = std::get_if<Command>(&decoded)) rover_ = apply_command(rover_, *c, now_ms);
}

void Centre::set_mode(Mode m) {
  if (m == Mode::MotionDetection) {
    if (mode_ != Mode::MotionDetection) window_ = FrameWindow{};
    // Re-selecting MotionDetection re-arms a disarmed detector.
    alarm_ = start_monitoring(std::move(alarm_));
  } else if (mode_ == Mode::MotionDetection) {
    alarm_.phase = AlarmPhase::Idle;
    alarm_.consecutive_hits = 0;
  }
  mode_ = m;
}

void Centre::broadcast_control(const proto::ControlMessage& m) {
  for (auto& [id, s] : sessions_)
    if (s.state.phase == proto::SessionPhase::Ready) s.queue.push_control(m);
}

void Centre::tick(std::int64_t now_ms) {
  rover_ = watchdog(rover_, now_ms, cfg_.watchdog_timeout_ms);

  if (auto f = source_->capture(rover_)) {
    f->set_stamp(std::uint64_t(std::max<std::int64_t>(now_ms, 0)), captured_++);
    if (recorder_) recorder_->append(*f);

    FrameRecord rec;
    rec.seq = f->seq();
    rec.mode = mode_;
    if (mode_ == Mode::MotionDetection) {
      window_.push(f->format() == PixelFormat::Gray8 ? *f : to_gray(*f));
      if (window_.warm()) {
        const MotionMask mask = four_frame_mask(window_, cfg_.detector);
        rec.motion_ratio = motion_ratio(mask);
        if (alarm_.phase != AlarmPhase::Idle) {
          auto stepped = alarm_step(std::move(alarm_), mask, cfg_.detector);
          alarm_ = std::move(stepped.state);
          if (!stepped.events.empty()) {
            rec.alarm_raised = true;
            broadcast_control(proto::alarm_event(std::uint32_t(f->seq()), *rec.motion_ratio));
          }
        }
      }
    } else if (mode_ == Mode::Tracing) {
      const TrackResult tr = track_step(*f, cfg_.color, cfg_.tracker);
      rec.command = tr.command;
      dispatch(tr.command, now_ms);
    }
    rec.alarm = alarm_.phase;
    if (on_record) on_record(rec);

    if (const auto ready = ready_session()) sessions_.at(*ready).queue.push_frame(proto::frame(*f));
    last_frame_ = std::move(*f);
  }

  rover_ = step(rover_, 1.0 / cfg_.frame_rate);
}

void Centre::start_recording(const std::filesystem::path& path) {
  stop_recording();
  recorder_ = std::make_unique<Recorder>(path);
}

void Centre::stop_recording() {
  if (!recorder_) return;
  recorder_->finish();
  recorder_.reset();
}

}  // namespace sentry::centre
