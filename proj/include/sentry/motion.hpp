#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sentry/imaging.hpp"

namespace sentry {

/// Binary per-pixel map, one byte per pixel holding 0 or 1.
class MotionMask {
 public:
  MotionMask() = default;
  MotionMask(int width, int height);
  MotionMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::span<std::uint8_t> bits() noexcept { return bits_; }

  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool v) { bits_[index(x, y)] = v ? 1 : 0; }

  std::size_t popcount() const;
  bool empty_of_motion() const { return popcount() == 0; }

  MotionMask flipped_horizontally() const;
  /// Debug dump: 0 -> 0, 1 -> 255.
  Frame to_frame() const;

  friend bool operator==(const MotionMask&, const MotionMask&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return std::size_t(y) * std::size_t(width_) + std::size_t(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

class MotionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public MotionError {
 public:
  using MotionError::MotionError;
};

class NotReady : public MotionError {
 public:
  using MotionError::MotionError;
};

class StateError : public MotionError {
 public:
  using MotionError::MotionError;
};

struct DetectorConfig {
  int tau = 25;
  double min_ratio = 0.005;
  int persist_k = 2;
  bool denoise = true;

  void validate() const;
};

/// The four most recent GRAY8 frames, oldest first.
class FrameWindow {
 public:
  static constexpr std::size_t kDepth = 4;

  /// Appends a frame. A seq gap restarts the window from this frame; a
  /// non-increasing seq or a shape change throws.
  void push(Frame gray);
  bool warm() const noexcept { return frames_.size() == kDepth; }
  std::size_t size() const noexcept { return frames_.size(); }
  const Frame& operator[](std::size_t i) const { return frames_[i]; }
  std::size_t restarts() const noexcept { return restarts_; }

 private:
  std::deque<Frame> frames_;
  std::size_t restarts_ = 0;
};

MotionMask frame_difference(const Frame& a, const Frame& b, int tau);
/// B0 = diff(f3,f2), B1 = diff(f2,f1), B2 = diff(f1,f0); result B0 & (B1 | B2),
/// then eroded when cfg.denoise.
MotionMask four_frame_mask(const FrameWindow& window, const DetectorConfig& cfg);
MotionMask denoise(const MotionMask& m);
double motion_ratio(const MotionMask& m);

/// Running-average reference image.
class BackgroundModel {
 public:
  BackgroundModel(const Frame& initial, double alpha);
  BackgroundModel(int width, int height, std::vector<double> reference, double alpha);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double alpha() const noexcept { return alpha_; }
  std::span<const double> reference() const noexcept { return reference_; }

 private:
  friend std::pair<MotionMask, BackgroundModel> bg_step(BackgroundModel, const Frame&, int);

  int width_;
  int height_;
  std::vector<double> reference_;
  double alpha_;
};

std::pair<MotionMask, BackgroundModel> bg_step(BackgroundModel model, const Frame& f, int tau);

/// Salted SHA-256 of a password; comparison is constant-time.
class PasswordDigest {
 public:
  static constexpr std::size_t kSaltSize = 16;
  static constexpr std::size_t kDigestSize = 32;

  static PasswordDigest create(std::string_view password);
  static PasswordDigest create(std::string_view password,
                               const std::array<std::uint8_t, kSaltSize>& salt);

  bool matches(std::string_view password) const;

 private:
  std::array<std::uint8_t, kSaltSize> salt_{};
  std::array<std::uint8_t, kDigestSize> digest_{};
};

enum class AlarmPhase : std::uint8_t { Idle, Monitoring, Alarm };
std::string_view to_string(AlarmPhase p);

enum class AlarmEvent : std::uint8_t { AlarmRaised };

struct AlarmState {
  AlarmPhase phase = AlarmPhase::Idle;
  int consecutive_hits = 0;
  PasswordDigest password;

  static AlarmState idle(std::string_view password);
};

/// IDLE -> MONITORING. Already monitoring or alarmed states are returned as-is.
AlarmState start_monitoring(AlarmState s);

struct AlarmStep {
  AlarmState state;
  std::vector<AlarmEvent> events;
};

AlarmStep alarm_step(AlarmState s, const MotionMask& m, const DetectorConfig& cfg);

struct DisarmRejected {};
using DisarmOutcome = std::variant<AlarmState, DisarmRejected>;

DisarmOutcome disarm(const AlarmState& s, std::string_view password);

}  // namespace sentry
