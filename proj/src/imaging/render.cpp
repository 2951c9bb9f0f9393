#include <algorithm>
#include <cmath>
#include <numeric>

#include "sentry/imaging.hpp"
#include "sentry/kernels.hpp"

namespace sentry {

namespace {

constexpr int kLightsBoost = 40;
constexpr double kLightsRange = 2.0;
// Absorbs rounding when an object sits exactly on the field-of-view edge.
constexpr double kFovEpsilon = 1e-9;

struct Projected {
  double distance;
  double column;
  int radius;
  Rgb color;
};

void fill_disc(Frame& img, double cx, double cy, int r, Rgb color) {
  const double r2 = double(r) * double(r);
  const int y0 = std::max(0, int(std::floor(cy - r)));
  const int y1 = std::min(img.height() - 1, int(std::ceil(cy + r)));
  const int x0 = std::max(0, int(std::floor(cx - r)));
  const int x1 = std::min(img.width() - 1, int(std::ceil(cx + r)));
  for (int y = y0; y <= y1; ++y) {
    const double dy = y - cy;
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - cx;
      if (dx * dx + dy * dy <= r2) img.set_rgb(x, y, color);
    }
  }
}

}  // namespace

void Scene::validate() const {
  for (const auto& o : objects) {
    if (!std::isfinite(o.x) || !std::isfinite(o.y) || !std::isfinite(o.radius))
      throw ParameterError("scene object coordinates must be finite");
    if (o.radius <= 0.0) throw ParameterError("scene object radius must be positive");
  }
}

double projected_column(double bearing_rad, int width) {
  return width / 2.0 * (1.0 + bearing_rad / deg_to_rad(kCameraFovDeg / 2.0));
}

int projected_radius(double radius, double distance, int height) {
  const long r = std::lround(kFocalScale * radius / distance);
  return int(std::clamp<long>(r, 1, height / 2));
}

Frame render_scene(const Scene& scene, const Pose& pose, int width, int height,
                   CameraFlags flags, std::uint64_t timestamp_ms, std::uint64_t seq) {
  if (width < 8 || height < 8) throw ParameterError("render size must be at least 8x8");
  scene.validate();

  Frame img(width, height, PixelFormat::Rgb24, timestamp_ms, seq);
  std::fill(img.data().begin(), img.data().end(), scene.background_gray);

  const double half_fov = deg_to_rad(kCameraFovDeg / 2.0);
  std::vector<Projected> visible;
  for (const auto& o : scene.objects) {
    const double d = std::hypot(o.x - pose.x, o.y - pose.y);
    if (d <= 0.0) continue;
    const double beta = bearing_to(pose, o.x, o.y);
    if (std::abs(beta) > half_fov + kFovEpsilon) continue;
    Rgb color = o.color;
    if (flags.lights && d < kLightsRange) {
      for (auto& c : color) c = std::uint8_t(std::min(255, c + kLightsBoost));
    }
    visible.push_back({d, projected_column(beta, width), projected_radius(o.radius, d, height),
                       color});
  }
  // Painter's order: farthest first.
  std::stable_sort(visible.begin(), visible.end(),
                   [](const Projected& a, const Projected& b) { return a.distance > b.distance; });
  for (const auto& p : visible) fill_disc(img, p.column, height / 2.0, p.radius, p.color);

  if (flags.night_vision) {
    std::vector<std::uint8_t> luma(img.pixel_count());
    kernels::parallel::luma(img.data(), luma);
    auto px = img.data();
    for (std::size_t i = 0; i < luma.size(); ++i) {
      const auto v = std::uint8_t(std::min(255, luma[i] * 3 / 2));
      px[3 * i] = px[3 * i + 1] = px[3 * i + 2] = v;
    }
  }
  return img;
}

}  // namespace sentry
