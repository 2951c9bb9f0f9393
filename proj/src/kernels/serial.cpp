#include <algorithm>
#include <cmath>

#include "sentry/kernels.hpp"

namespace sentry::kernels::serial {

void luma(Bytes rgb, MutBytes gray) {
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const unsigned r = rgb[3 * i], g = rgb[3 * i + 1], b = rgb[3 * i + 2];
    gray[i] = static_cast<std::uint8_t>((77 * r + 150 * g + 29 * b) >> 8);
  }
}

void abs_diff_threshold(Bytes a, Bytes b, int tau, MutBytes mask) {
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = std::abs(int(a[i]) - int(b[i])) > tau ? 1 : 0;
  }
}

void four_frame_combine(Bytes f0, Bytes f1, Bytes f2, Bytes f3, int tau, MutBytes mask) {
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const bool b0 = std::abs(int(f3[i]) - int(f2[i])) > tau;
    const bool b1 = std::abs(int(f2[i]) - int(f1[i])) > tau;
    const bool b2 = std::abs(int(f1[i]) - int(f0[i])) > tau;
    mask[i] = (b0 && (b1 || b2)) ? 1 : 0;
  }
}

void erode3x3(Bytes mask, int width, int height, MutBytes out) {
  for (int y = 0; y < height; ++y) {
    const int y0 = std::max(0, y - 1), y1 = std::min(height - 1, y + 1);
    for (int x = 0; x < width; ++x) {
      const int x0 = std::max(0, x - 1), x1 = std::min(width - 1, x + 1);
      std::uint8_t keep = 1;
      for (int yy = y0; yy <= y1 && keep; ++yy) {
        for (int xx = x0; xx <= x1; ++xx) {
          if (!mask[std::size_t(yy) * std::size_t(width) + std::size_t(xx)]) {
            keep = 0;
            break;
          }
        }
      }
      out[std::size_t(y) * std::size_t(width) + std::size_t(x)] = keep;
    }
  }
}

void color_match(Bytes rgb, std::array<std::uint8_t, 3> ref, std::uint32_t tol_sq,
                 MutBytes mask) {
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const int dr = int(rgb[3 * i]) - ref[0];
    const int dg = int(rgb[3 * i + 1]) - ref[1];
    const int db = int(rgb[3 * i + 2]) - ref[2];
    mask[i] = std::uint32_t(dr * dr + dg * dg + db * db) <= tol_sq ? 1 : 0;
  }
}

std::size_t count_ones(Bytes mask) {
  std::size_t n = 0;
  for (auto v : mask) n += v;
  return n;
}

QuadrantSums quadrant_sums(Bytes mask, int width, int height) {
  QuadrantSums s;
  const int half_w = width / 2, half_h = height / 2;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (!mask[std::size_t(y) * std::size_t(width) + std::size_t(x)]) continue;
      const int q = (y < half_h ? 0 : 2) + (x < half_w ? 0 : 1);
      ++s.counts[q];
      s.sum_x += std::uint64_t(x);
      s.sum_y += std::uint64_t(y);
    }
  }
  return s;
}

void background_update(std::span<double> reference, Bytes frame, double alpha, int tau,
                       MutBytes mask) {
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double f = frame[i];
    mask[i] = std::abs(f - reference[i]) > tau ? 1 : 0;
    reference[i] = std::clamp((1.0 - alpha) * reference[i] + alpha * f, 0.0, 255.0);
  }
}

}  // namespace sentry::kernels::serial
