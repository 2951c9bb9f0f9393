#include <algorithm>
#include <string>

#include "sentry/imaging.hpp"

namespace sentry {

void SquareMotionParams::validate() const {
  if (width < 8 || height < 8) throw ParameterError("sequence size must be at least 8x8");
  if (side < 1) throw ParameterError("square side must be positive");
  if (frames < 1) throw ParameterError("frame count must be positive");
  for (int t = 0; t < frames; ++t) {
    const auto [x, y] = position(t);
    if (x < 0 || y < 0 || x + side > width || y + side > height)
      throw ParameterError("square leaves the frame at t=" + std::to_string(t));
  }
}

FrameSequence synth_motion_sequence(const SquareMotionParams& p) {
  p.validate();
  FrameSequence seq;
  for (int t = 0; t < p.frames; ++t) {
    Frame f(p.width, p.height, PixelFormat::Gray8, std::uint64_t(t) * p.frame_interval_ms,
            std::uint64_t(t));
    std::fill(f.data().begin(), f.data().end(), p.bg);
    const auto [sx, sy] = p.position(t);
    for (int y = sy; y < sy + p.side; ++y)
      for (int x = sx; x < sx + p.side; ++x) f.set_gray(x, y, p.fg);
    seq.push_back(std::move(f));
  }
  return seq;
}

std::vector<std::uint8_t> square_motion_truth(const SquareMotionParams& p, int t) {
  if (t < 1 || t >= p.frames) throw ParameterError("truth needs 1 <= t < frames");
  const auto inside = [&](int t_, int x, int y) {
    const auto [sx, sy] = p.position(t_);
    return x >= sx && x < sx + p.side && y >= sy && y < sy + p.side;
  };
  std::vector<std::uint8_t> out(std::size_t(p.width) * std::size_t(p.height));
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x)
      out[std::size_t(y) * std::size_t(p.width) + std::size_t(x)] =
          inside(t - 1, x, y) != inside(t, x, y) ? 1 : 0;
  return out;
}

}  // namespace sentry
