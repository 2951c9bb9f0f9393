#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sentry/errors.hpp"
#include "sentry/geometry.hpp"

namespace sentry {

enum class PixelFormat : std::uint8_t { Gray8 = 0, Rgb24 = 1 };

constexpr std::size_t bytes_per_pixel(PixelFormat f) { return f == PixelFormat::Gray8 ? 1 : 3; }

class ImagingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input frame in the wrong pixel format for the requested operation.
class FormatError : public ImagingError {
 public:
  using ImagingError::ImagingError;
};

class ParseError : public ImagingError {
 public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// One image. Pixel data is row-major, interleaved RGB for Rgb24.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, PixelFormat format, std::uint64_t timestamp_ms = 0,
        std::uint64_t seq = 0);
  Frame(int width, int height, PixelFormat format, std::vector<std::uint8_t> data,
        std::uint64_t timestamp_ms = 0, std::uint64_t seq = 0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  PixelFormat format() const noexcept { return format_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  std::size_t byte_size() const noexcept { return data_.size(); }

  std::uint64_t timestamp_ms() const noexcept { return timestamp_ms_; }
  std::uint64_t seq() const noexcept { return seq_; }
  void set_stamp(std::uint64_t timestamp_ms, std::uint64_t seq) noexcept {
    timestamp_ms_ = timestamp_ms;
    seq_ = seq;
  }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  std::uint8_t gray(int x, int y) const { return data_[index(x, y)]; }
  std::array<std::uint8_t, 3> rgb(int x, int y) const {
    const std::size_t i = index(x, y) * 3;
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set_gray(int x, int y, std::uint8_t v) { data_[index(x, y)] = v; }
  void set_rgb(int x, int y, std::array<std::uint8_t, 3> c) {
    const std::size_t i = index(x, y) * 3;
    data_[i] = c[0];
    data_[i + 1] = c[1];
    data_[i + 2] = c[2];
  }

  bool same_shape(const Frame& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ && format_ == other.format_;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  PixelFormat format_ = PixelFormat::Gray8;
  std::vector<std::uint8_t> data_;
  std::uint64_t timestamp_ms_ = 0;
  std::uint64_t seq_ = 0;
};

/// Ordered frames of uniform shape with strictly increasing seq.
class FrameSequence {
 public:
  FrameSequence() = default;

  void push_back(Frame f);
  std::size_t size() const noexcept { return frames_.size(); }
  bool empty() const noexcept { return frames_.empty(); }
  const Frame& operator[](std::size_t i) const { return frames_[i]; }
  const Frame& front() const { return frames_.front(); }
  const Frame& back() const { return frames_.back(); }
  auto begin() const noexcept { return frames_.begin(); }
  auto end() const noexcept { return frames_.end(); }

 private:
  std::vector<Frame> frames_;
};

using Rgb = std::array<std::uint8_t, 3>;

struct SceneObject {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.5;
  Rgb color{255, 0, 0};
};

/// Flat world seen by the simulated camera.
struct Scene {
  std::uint8_t background_gray = 96;
  std::vector<SceneObject> objects;

  void validate() const;
};

struct CameraFlags {
  bool lights = false;
  bool night_vision = false;
};

inline constexpr int kDefaultWidth = 320;
inline constexpr int kDefaultHeight = 240;
inline constexpr double kCameraFovDeg = 60.0;
inline constexpr double kFocalScale = 140.0;

// ---- conversions -----------------------------------------------------------

/// Integer BT.601 luma, (77 R + 150 G + 29 B) >> 8.
Frame to_gray(const Frame& rgb);
/// Replicates gray into three channels.
Frame gray_to_rgb(const Frame& gray);

// ---- PNM --------------------------------------------------------------------

Frame read_pnm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_pnm(const Frame& f);
Frame load_pnm(const std::filesystem::path& path);
void save_pnm(const std::filesystem::path& path, const Frame& f);

// ---- scene rendering ------------------------------------------------------

/// Column of the blob center for an object at right-positive `bearing_rad`.
double projected_column(double bearing_rad, int width);
/// Pixel radius for an object of `radius` at distance `distance`.
int projected_radius(double radius, double distance, int height);

Frame render_scene(const Scene& scene, const Pose& pose, int width, int height,
                   CameraFlags flags = {}, std::uint64_t timestamp_ms = 0,
                   std::uint64_t seq = 0);

// ---- synthetic sequences --------------------------------------------------

struct SquareMotionParams {
  int width = 64;
  int height = 64;
  int side = 8;
  int start_x = 0;
  int start_y = 0;
  int velocity_x = 0;
  int velocity_y = 0;
  int frames = 10;
  std::uint8_t fg = 220;
  std::uint8_t bg = 30;
  std::uint64_t frame_interval_ms = 100;

  void validate() const;
  /// Top-left corner of the square in frame `t`.
  std::pair<int, int> position(int t) const {
    return {start_x + t * velocity_x, start_y + t * velocity_y};
  }
};

FrameSequence synth_motion_sequence(const SquareMotionParams& p);

/// Ground-truth motion between frames t-1 and t: symmetric difference of the
/// two square footprints, one byte per pixel (0/1).
std::vector<std::uint8_t> square_motion_truth(const SquareMotionParams& p, int t);

// ---- SRSEQ1 container -------------------------------------------------------

std::vector<std::uint8_t> encode_sequence(const FrameSequence& seq);
FrameSequence decode_sequence(std::span<const std::uint8_t> bytes);
void save_sequence(const std::filesystem::path& path, const FrameSequence& seq);
FrameSequence load_sequence(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace sentry
