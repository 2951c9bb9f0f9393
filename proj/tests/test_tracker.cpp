#include <doctest.h>

#include <random>
#include <set>

#include "sentry/tracker.hpp"
#include "support.hpp"

using namespace sentry;

namespace {

Frame solid(int w, int h, Rgb c) {
  Frame f(w, h, PixelFormat::Rgb24);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) f.set_rgb(x, y, c);
  return f;
}

QuadrantReport report_at(double cx, std::size_t total) {
  QuadrantReport r;
  r.total = total;
  r.counts = {total, 0, 0, 0};
  if (total) r.centroid = Centroid{cx, 100.0};
  return r;
}

}  // namespace

TEST_CASE("match_color") {
  const ColorReference red{{255, 0, 0}, 60};
  CHECK(match_color(solid(1, 1, {255, 0, 0}), red).at(0, 0));
  CHECK(match_color(solid(1, 1, {200, 0, 0}), red).at(0, 0));
  CHECK_FALSE(match_color(solid(1, 1, {180, 0, 0}), red).at(0, 0));
  // Exactly on the boundary: 36^2 + 48^2 = 60^2.
  CHECK(match_color(solid(1, 1, {219, 48, 0}), red).at(0, 0));
  CHECK_FALSE(match_color(solid(1, 1, {219, 49, 0}), red).at(0, 0));
  CHECK_THROWS_AS(match_color(Frame(2, 2, PixelFormat::Gray8), red), FormatError);
}

TEST_CASE("match_color is pixel-local") {
  std::mt19937_64 rng(31);
  const ColorReference ref{{120, 40, 200}, 90};
  for (int i = 0; i < 100; ++i) {
    Frame f = testing::random_frame(rng, 11, 7, PixelFormat::Rgb24);
    const auto before = match_color(f, ref);
    const int x = int(rng() % 11), y = int(rng() % 7);
    f.set_rgb(x, y, {std::uint8_t(rng()), std::uint8_t(rng()), std::uint8_t(rng())});
    const auto after = match_color(f, ref);
    for (int yy = 0; yy < 7; ++yy)
      for (int xx = 0; xx < 11; ++xx)
        if (xx != x || yy != y) REQUIRE(before.at(xx, yy) == after.at(xx, yy));
  }
}

TEST_CASE("quadrant_report") {
  MotionMask one(4, 4);
  one.set(0, 0, true);
  auto r = quadrant_report(one);
  CHECK(r.counts == std::array<std::size_t, 4>{1, 0, 0, 0});
  CHECK(r.total == 1);
  REQUIRE(r.centroid);
  CHECK(r.centroid->x == 0.0);
  CHECK(r.centroid->y == 0.0);

  MotionMask all(4, 4);
  for (auto& b : all.bits()) b = 1;
  r = quadrant_report(all);
  CHECK(r.counts == std::array<std::size_t, 4>{4, 4, 4, 4});
  CHECK(r.centroid->x == 1.5);
  CHECK(r.centroid->y == 1.5);

  r = quadrant_report(MotionMask(4, 4));
  CHECK(r.total == 0);
  CHECK_FALSE(r.centroid);
}

TEST_CASE("quadrant counts sum to the popcount and the centroid stays in bounds") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 200; ++i) {
    const int w = 1 + int(rng() % 40), h = 1 + int(rng() % 30);
    MotionMask m(w, h);
    for (auto& b : m.bits()) b = rng() % 3 == 0 ? 1 : 0;
    const auto r = quadrant_report(m);
    REQUIRE(r.total == m.popcount());
    REQUIRE(r.counts[0] + r.counts[1] + r.counts[2] + r.counts[3] == r.total);
    REQUIRE(r.centroid.has_value() == (r.total > 0));
    if (r.centroid) {
      REQUIRE((r.centroid->x >= 0 && r.centroid->x <= w - 1));
      REQUIRE((r.centroid->y >= 0 && r.centroid->y <= h - 1));
    }
  }
}

TEST_CASE("steer rules") {
  const TrackerConfig cfg;
  CHECK(steer(report_at(0, 0), 320, 240, cfg) == DriveCommand::Stop);
  CHECK(steer(report_at(160, 19), 320, 240, cfg) == DriveCommand::Stop);
  CHECK(steer(report_at(80, 500), 320, 240, cfg) == DriveCommand::Left);
  CHECK(steer(report_at(160, 500), 320, 240, cfg) == DriveCommand::Forward);
  CHECK(steer(report_at(300, 500), 320, 240, cfg) == DriveCommand::Right);
  CHECK(steer(report_at(80, 1536), 320, 240, cfg) == DriveCommand::Stop);  // reached
  CHECK(steer(report_at(80, 1535), 320, 240, cfg) == DriveCommand::Left);
  // Dead-zone edges, measured at the pixel center.
  CHECK(steer(report_at(127.4, 500), 320, 240, cfg) == DriveCommand::Left);
  CHECK(steer(report_at(127.5, 500), 320, 240, cfg) == DriveCommand::Forward);
  CHECK(steer(report_at(191.5, 500), 320, 240, cfg) == DriveCommand::Forward);
  CHECK(steer(report_at(191.6, 500), 320, 240, cfg) == DriveCommand::Right);
}

TEST_CASE("steer is total and deterministic over a grid") {
  const TrackerConfig cfg;
  const std::set<DriveCommand> allowed{DriveCommand::Stop, DriveCommand::Left, DriveCommand::Right,
                                       DriveCommand::Forward};
  for (int cx = 0; cx < 320; ++cx)
    for (std::size_t total : {0u, 1u, 19u, 20u, 21u, 700u, 1535u, 1536u, 5000u}) {
      const auto a = steer(report_at(cx, total), 320, 240, cfg);
      REQUIRE(allowed.count(a) == 1);
      REQUIRE(a == steer(report_at(cx, total), 320, 240, cfg));
    }
}

TEST_CASE("mirroring the mask mirrors the steering decision") {
  std::mt19937_64 rng(33);
  const TrackerConfig cfg{.dead_zone_frac = 0.1, .min_pixels = 5, .target_fill = 0.3};
  int turns = 0;
  for (int i = 0; i < 2000; ++i) {
    const int w = 16 + int(rng() % 50), h = 8 + int(rng() % 20);
    MotionMask m(w, h);
    // A random column band so that all four outcomes occur.
    const int x0 = int(rng() % w), width = 1 + int(rng() % 6);
    for (int y = 0; y < h; ++y)
      for (int x = x0; x < std::min(w, x0 + width); ++x)
        if (rng() % 2) m.set(x, y, true);
    const auto a = steer(quadrant_report(m), w, h, cfg);
    const auto b = steer(quadrant_report(m.flipped_horizontally()), w, h, cfg);
    if (a == DriveCommand::Left) {
      REQUIRE(b == DriveCommand::Right);
      ++turns;
    } else if (a == DriveCommand::Right) {
      REQUIRE(b == DriveCommand::Left);
      ++turns;
    } else {
      REQUIRE(a == b);
    }
  }
  CHECK(turns > 100);
}

TEST_CASE("track_step") {
  const ColorReference red{{255, 0, 0}, 60};
  const TrackerConfig cfg;

  SUBCASE("no matches") {
    const auto r = track_step(solid(32, 24, {0, 0, 255}), red, cfg);
    CHECK(r.command == DriveCommand::Stop);
    CHECK(r.report.total == 0);
    CHECK(r.mask.popcount() == 0);
  }
  SUBCASE("ball at -20 deg steers left, centroid where the projection puts it") {
    Scene scene;
    double ox, oy;
    point_at_bearing(Pose{}, 5.0, deg_to_rad(-20.0), ox, oy);
    scene.objects = {{ox, oy, 0.5, {255, 0, 0}}};
    const auto r = track_step(render_scene(scene, Pose{}, 320, 240), red, cfg);
    REQUIRE(r.report.centroid);
    const double expected = projected_column(deg_to_rad(-20.0), 320);  // 53.33
    CHECK(expected == doctest::Approx(160.0 * (1.0 - 20.0 / 30.0)));
    CHECK(std::abs(r.report.centroid->x - expected) < 0.5);
    CHECK(r.report.centroid->y == doctest::Approx(120.0));
    CHECK(r.command == DriveCommand::Left);
  }
  SUBCASE("small ball dead ahead goes forward") {
    Scene scene;
    scene.objects = {{6.0, 0.0, 0.3, {255, 0, 0}}};
    const auto r = track_step(render_scene(scene, Pose{}, 320, 240), red, cfg);
    CHECK(r.report.centroid->x == doctest::Approx(160.0));
    CHECK(r.command == DriveCommand::Forward);
  }
}

TEST_CASE("tracking overlay paints matches red over gray") {
  Frame f = solid(4, 2, {10, 200, 30});
  f.set_rgb(1, 1, {255, 0, 0});
  const auto mask = match_color(f, {{255, 0, 0}, 10});
  const auto o = tracking_overlay(f, mask);
  CHECK(o.rgb(1, 1) == Rgb{255, 0, 0});
  const auto g = std::uint8_t((77 * 10 + 150 * 200 + 29 * 30) >> 8);
  CHECK(o.rgb(0, 0) == Rgb{g, g, g});
}
