#include <algorithm>

#include "sentry/kernels.hpp"
#include "sentry/motion.hpp"

namespace sentry {

MotionMask::MotionMask(int width, int height)
    : MotionMask(width, height,
                 std::vector<std::uint8_t>(std::size_t(std::max(width, 0)) *
                                           std::size_t(std::max(height, 0)))) {}

MotionMask::MotionMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width < 1 || height < 1) throw ParameterError("mask dimensions must be positive");
  if (bits_.size() != std::size_t(width) * std::size_t(height))
    throw ParameterError("mask length does not match dimensions");
  if (std::any_of(bits_.begin(), bits_.end(), [](auto b) { return b > 1; }))
    throw ParameterError("mask values must be 0 or 1");
}

std::size_t MotionMask::popcount() const { return kernels::parallel::count_ones(bits_); }

MotionMask MotionMask::flipped_horizontally() const {
  MotionMask out(width_, height_);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) out.set(width_ - 1 - x, y, at(x, y));
  return out;
}

Frame MotionMask::to_frame() const {
  Frame f(width_, height_, PixelFormat::Gray8);
  std::transform(bits_.begin(), bits_.end(), f.data().begin(),
                 [](std::uint8_t b) { return std::uint8_t(b ? 255 : 0); });
  return f;
}

MotionMask denoise(const MotionMask& m) {
  MotionMask out(m.width(), m.height());
  kernels::parallel::erode3x3(m.bits(), m.width(), m.height(), out.bits());
  return out;
}

double motion_ratio(const MotionMask& m) {
  if (m.size() == 0) return 0.0;
  return double(m.popcount()) / double(m.size());
}

}  // namespace sentry
