#pragma once

// Per-pixel kernels behind the imaging, motion and tracker operations.
//
// Every kernel exists twice with the same signature: `serial` is the plain
// reference loop, `parallel` splits rows across OpenMP threads (and degrades
// to a single thread when built without OpenMP). The public operations call
// `parallel`; tests hold the two to byte equality and the benchmark compares
// their speed.
//
// Masks are one byte per pixel holding 0 or 1. Output spans must already
// have the input's pixel count; kernels do not allocate.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace sentry::kernels {

using Bytes = std::span<const std::uint8_t>;
using MutBytes = std::span<std::uint8_t>;

struct QuadrantSums {
  std::array<std::size_t, 4> counts{};  // tl, tr, bl, br
  std::uint64_t sum_x = 0;
  std::uint64_t sum_y = 0;
};

bool openmp_enabled() noexcept;
int max_threads() noexcept;

namespace serial {
void luma(Bytes rgb, MutBytes gray);
void abs_diff_threshold(Bytes a, Bytes b, int tau, MutBytes mask);
void four_frame_combine(Bytes f0, Bytes f1, Bytes f2, Bytes f3, int tau, MutBytes mask);
void erode3x3(Bytes mask, int width, int height, MutBytes out);
void color_match(Bytes rgb, std::array<std::uint8_t, 3> ref, std::uint32_t tol_sq, MutBytes mask);
std::size_t count_ones(Bytes mask);
QuadrantSums quadrant_sums(Bytes mask, int width, int height);
void background_update(std::span<double> reference, Bytes frame, double alpha, int tau,
                       MutBytes mask);
}  // namespace serial

namespace parallel {
void luma(Bytes rgb, MutBytes gray);
void abs_diff_threshold(Bytes a, Bytes b, int tau, MutBytes mask);
void four_frame_combine(Bytes f0, Bytes f1, Bytes f2, Bytes f3, int tau, MutBytes mask);
void erode3x3(Bytes mask, int width, int height, MutBytes out);
void color_match(Bytes rgb, std::array<std::uint8_t, 3> ref, std::uint32_t tol_sq, MutBytes mask);
std::size_t count_ones(Bytes mask);
QuadrantSums quadrant_sums(Bytes mask, int width, int height);
void background_update(std::span<double> reference, Bytes frame, double alpha, int tau,
                       MutBytes mask);
}  // namespace parallel

}  // namespace sentry::kernels
