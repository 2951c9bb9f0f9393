// Serial reference loops against their OpenMP counterparts, per kernel and
// frame size. Run with OMP_NUM_THREADS to vary the thread count.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sentry/kernels.hpp"

namespace k = sentry::kernels;

namespace {

struct Inputs {
  int w, h;
  std::vector<std::uint8_t> rgb, f0, f1, f2, f3, mask, out;
  std::vector<double> reference;

  Inputs(int width, int height) : w(width), h(height) {
    std::mt19937_64 rng(42);
    const std::size_t n = std::size_t(w) * h;
    auto fill = [&](std::vector<std::uint8_t>& v, std::size_t len) {
      v.resize(len);
      for (auto& b : v) b = std::uint8_t(rng());
    };
    fill(rgb, 3 * n);
    fill(f0, n);
    fill(f1, n);
    fill(f2, n);
    fill(f3, n);
    mask.resize(n);
    for (auto& b : mask) b = rng() % 4 != 0;
    out.resize(n);
    reference.assign(f0.begin(), f0.end());
  }
};

const Inputs& inputs(int w) {
  static const Inputs vga(640, 480), hd(1280, 720), qvga(320, 240);
  return w == 320 ? qvga : w == 640 ? vga : hd;
}

template <bool Parallel>
void Luma(benchmark::State& st) {
  const auto& in = inputs(int(st.range(0)));
  std::vector<std::uint8_t> gray(in.f0.size());
  for (auto _ : st) {
    if constexpr (Parallel) k::parallel::luma(in.rgb, gray);
    else k::serial::luma(in.rgb, gray);
    benchmark::DoNotOptimize(gray.data());
  }
  st.SetItemsProcessed(st.iterations() * std::int64_t(gray.size()));
}

template <bool Parallel>
void FourFrame(benchmark::State& st) {
  const auto& in = inputs(int(st.range(0)));
  std::vector<std::uint8_t> mask(in.f0.size());
  for (auto _ : st) {
    if constexpr (Parallel) k::parallel::four_frame_combine(in.f0, in.f1, in.f2, in.f3, 25, mask);
    else k::serial::four_frame_combine(in.f0, in.f1, in.f2, in.f3, 25, mask);
    benchmark::DoNotOptimize(mask.data());
  }
  st.SetItemsProcessed(st.iterations() * std::int64_t(mask.size()));
}

template <bool Parallel>
void Erode(benchmark::State& st) {
  const auto& in = inputs(int(st.range(0)));
  std::vector<std::uint8_t> out(in.mask.size());
  for (auto _ : st) {
    if constexpr (Parallel) k::parallel::erode3x3(in.mask, in.w, in.h, out);
    else k::serial::erode3x3(in.mask, in.w, in.h, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * std::int64_t(out.size()));
}

template <bool Parallel>
void ColorMatch(benchmark::State& st) {
  const auto& in = inputs(int(st.range(0)));
  std::vector<std::uint8_t> mask(in.f0.size());
  for (auto _ : st) {
    if constexpr (Parallel) k::parallel::color_match(in.rgb, {255, 0, 0}, 60 * 60, mask);
    else k::serial::color_match(in.rgb, {255, 0, 0}, 60 * 60, mask);
    benchmark::DoNotOptimize(mask.data());
  }
  st.SetItemsProcessed(st.iterations() * std::int64_t(mask.size()));
}

template <bool Parallel>
void Quadrants(benchmark::State& st) {
  const auto& in = inputs(int(st.range(0)));
  for (auto _ : st) {
    k::QuadrantSums q;
    if constexpr (Parallel) q = k::parallel::quadrant_sums(in.mask, in.w, in.h);
    else q = k::serial::quadrant_sums(in.mask, in.w, in.h);
    benchmark::DoNotOptimize(q);
  }
  st.SetItemsProcessed(st.iterations() * std::int64_t(in.mask.size()));
}

template <bool Parallel>
void Background(benchmark::State& st) {
  const auto& in = inputs(int(st.range(0)));
  std::vector<double> ref = in.reference;
  std::vector<std::uint8_t> mask(in.f1.size());
  for (auto _ : st) {
    if constexpr (Parallel) k::parallel::background_update(ref, in.f1, 0.05, 25, mask);
    else k::serial::background_update(ref, in.f1, 0.05, 25, mask);
    benchmark::DoNotOptimize(mask.data());
  }
  st.SetItemsProcessed(st.iterations() * std::int64_t(mask.size()));
}

#define SENTRY_BENCH_PAIR(fn)                                                       \
  BENCHMARK_TEMPLATE(fn, false)->Name(#fn "/serial")->Arg(320)->Arg(640)->Arg(1280); \
  BENCHMARK_TEMPLATE(fn, true)->Name(#fn "/parallel")->Arg(320)->Arg(640)->Arg(1280)

SENTRY_BENCH_PAIR(Luma);
SENTRY_BENCH_PAIR(FourFrame);
SENTRY_BENCH_PAIR(Erode);
SENTRY_BENCH_PAIR(ColorMatch);
SENTRY_BENCH_PAIR(Quadrants);
SENTRY_BENCH_PAIR(Background);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::AddCustomContext("openmp", k::openmp_enabled() ? "on" : "off");
  benchmark::AddCustomContext("max_threads", std::to_string(k::max_threads()));
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
}
