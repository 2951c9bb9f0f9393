#include <algorithm>
#include <cmath>
#include <cstddef>

#include "sentry/kernels.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace sentry::kernels {

bool openmp_enabled() noexcept {
#if defined(_OPENMP)
  return true;
#else
  return false;
#endif
}

int max_threads() noexcept {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace sentry::kernels

namespace sentry::kernels::parallel {

namespace {
// Below this many pixels the fork/join overhead dominates.
constexpr std::ptrdiff_t kMinParallel = 4096;
}  // namespace

void luma(Bytes rgb, MutBytes gray) {
  const auto n = static_cast<std::ptrdiff_t>(gray.size());
  const std::uint8_t* __restrict src = rgb.data();
  std::uint8_t* __restrict dst = gray.data();
#pragma omp parallel for simd schedule(static) if (n >= kMinParallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const unsigned r = src[3 * i], g = src[3 * i + 1], b = src[3 * i + 2];
    dst[i] = static_cast<std::uint8_t>((77 * r + 150 * g + 29 * b) >> 8);
  }
}

void abs_diff_threshold(Bytes a, Bytes b, int tau, MutBytes mask) {
  const auto n = static_cast<std::ptrdiff_t>(mask.size());
  const std::uint8_t* __restrict pa = a.data();
  const std::uint8_t* __restrict pb = b.data();
  std::uint8_t* __restrict out = mask.data();
#pragma omp parallel for simd schedule(static) if (n >= kMinParallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = std::abs(int(pa[i]) - int(pb[i])) > tau;
}

void four_frame_combine(Bytes f0, Bytes f1, Bytes f2, Bytes f3, int tau, MutBytes mask) {
  const auto n = static_cast<std::ptrdiff_t>(mask.size());
  const std::uint8_t* __restrict p0 = f0.data();
  const std::uint8_t* __restrict p1 = f1.data();
  const std::uint8_t* __restrict p2 = f2.data();
  const std::uint8_t* __restrict p3 = f3.data();
  std::uint8_t* __restrict out = mask.data();
#pragma omp parallel for simd schedule(static) if (n >= kMinParallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const int b0 = std::abs(int(p3[i]) - int(p2[i])) > tau;
    const int b1 = std::abs(int(p2[i]) - int(p1[i])) > tau;
    const int b2 = std::abs(int(p1[i]) - int(p0[i])) > tau;
    out[i] = std::uint8_t(b0 & (b1 | b2));
  }
}

void erode3x3(Bytes mask, int width, int height, MutBytes out) {
  const std::ptrdiff_t w = width;
  const std::uint8_t* src = mask.data();
  std::uint8_t* dst_all = out.data();
#pragma omp parallel for schedule(static) if (std::ptrdiff_t(width) * height >= kMinParallel)
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* __restrict up = src + std::max(0, y - 1) * w;
    const std::uint8_t* __restrict mid = src + y * w;
    const std::uint8_t* __restrict down = src + std::min(height - 1, y + 1) * w;
    std::uint8_t* __restrict dst = dst_all + y * w;
    // Clamped rows and columns repeat in-bounds neighbours, which leaves the
    // AND unchanged.
    auto col = [&](std::ptrdiff_t x) { return std::uint8_t(up[x] & mid[x] & down[x]); };
    if (w == 1) {
      dst[0] = col(0);
      continue;
    }
    dst[0] = col(0) & col(1);
#pragma omp simd
    for (std::ptrdiff_t x = 1; x < w - 1; ++x)
      dst[x] = up[x - 1] & up[x] & up[x + 1] & mid[x - 1] & mid[x] & mid[x + 1] & down[x - 1] &
               down[x] & down[x + 1];
    dst[w - 1] = col(w - 2) & col(w - 1);
  }
}

void color_match(Bytes rgb, std::array<std::uint8_t, 3> ref, std::uint32_t tol_sq,
                 MutBytes mask) {
  const auto n = static_cast<std::ptrdiff_t>(mask.size());
  const std::uint8_t* __restrict src = rgb.data();
  std::uint8_t* __restrict out = mask.data();
  const int r0 = ref[0], g0 = ref[1], b0 = ref[2];
#pragma omp parallel for simd schedule(static) if (n >= kMinParallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const int dr = int(src[3 * i]) - r0;
    const int dg = int(src[3 * i + 1]) - g0;
    const int db = int(src[3 * i + 2]) - b0;
    out[i] = std::uint32_t(dr * dr + dg * dg + db * db) <= tol_sq;
  }
}

std::size_t count_ones(Bytes mask) {
  const auto n = static_cast<std::ptrdiff_t>(mask.size());
  const std::uint8_t* p = mask.data();
  std::size_t total = 0;
#pragma omp parallel for simd schedule(static) reduction(+ : total) if (n >= kMinParallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) total += p[i];
  return total;
}

QuadrantSums quadrant_sums(Bytes mask, int width, int height) {
  const int half_w = width / 2, half_h = height / 2;
  std::size_t tl = 0, tr = 0, bl = 0, br = 0;
  std::uint64_t sx = 0, sy = 0;
#pragma omp parallel for schedule(static) reduction(+ : tl, tr, bl, br, sx, sy) \
    if (std::ptrdiff_t(width) * height >= kMinParallel)
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* row = mask.data() + std::ptrdiff_t(y) * width;
    std::size_t left = 0, right = 0;
    std::uint64_t row_x = 0;
    for (int x = 0; x < half_w; ++x) {
      left += row[x];
      row_x += std::uint64_t(row[x]) * std::uint64_t(x);
    }
    for (int x = half_w; x < width; ++x) {
      right += row[x];
      row_x += std::uint64_t(row[x]) * std::uint64_t(x);
    }
    if (y < half_h) {
      tl += left;
      tr += right;
    } else {
      bl += left;
      br += right;
    }
    sx += row_x;
    sy += std::uint64_t(y) * (left + right);
  }
  QuadrantSums s;
  s.counts = {tl, tr, bl, br};
  s.sum_x = sx;
  s.sum_y = sy;
  return s;
}

void background_update(std::span<double> reference, Bytes frame, double alpha, int tau,
                       MutBytes mask) {
  const auto n = static_cast<std::ptrdiff_t>(mask.size());
  double* __restrict ref = reference.data();
  const std::uint8_t* __restrict src = frame.data();
  std::uint8_t* __restrict out = mask.data();
#pragma omp parallel for simd schedule(static) if (n >= kMinParallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double f = src[i];
    out[i] = std::abs(f - ref[i]) > tau;
    ref[i] = std::clamp((1.0 - alpha) * ref[i] + alpha * f, 0.0, 255.0);
  }
}

}  // namespace sentry::kernels::parallel
