#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sentry/imaging.hpp"

namespace sentry::testing {

inline std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = std::uint8_t(rng());
  return out;
}

inline Frame random_frame(std::mt19937_64& rng, int w, int h, PixelFormat fmt,
                          std::uint64_t seq = 0) {
  return Frame(w, h, fmt, random_bytes(rng, std::size_t(w) * h * bytes_per_pixel(fmt)), seq * 100,
               seq);
}

inline Frame gray_frame(int w, int h, std::vector<std::uint8_t> px, std::uint64_t seq = 0) {
  return Frame(w, h, PixelFormat::Gray8, std::move(px), seq * 100, seq);
}

}  // namespace sentry::testing
