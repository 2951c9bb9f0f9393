#include "sentry/tracker.hpp"

#include "sentry/kernels.hpp"

namespace sentry {

void TrackerConfig::validate() const {
  if (!(dead_zone_frac > 0.0 && dead_zone_frac < 0.5))
    throw ParameterError("dead_zone_frac must be in (0, 0.5)");
  if (min_pixels < 1) throw ParameterError("min_pixels must be at least 1");
  if (!(target_fill > 0.0)) throw ParameterError("target_fill must be positive");
}

MotionMask match_color(const Frame& rgb, const ColorReference& ref) {
  if (rgb.format() != PixelFormat::Rgb24) throw FormatError("match_color expects RGB24");
  if (ref.tolerance < 0) throw ParameterError("tolerance must be non-negative");
  MotionMask m(rgb.width(), rgb.height());
  const auto tol_sq = std::uint32_t(ref.tolerance) * std::uint32_t(ref.tolerance);
  kernels::parallel::color_match(rgb.data(), ref.rgb, tol_sq, m.bits());
  return m;
}

QuadrantReport quadrant_report(const MotionMask& m) {
  const auto sums = kernels::parallel::quadrant_sums(m.bits(), m.width(), m.height());
  QuadrantReport rep;
  rep.counts = sums.counts;
  rep.total = sums.counts[0] + sums.counts[1] + sums.counts[2] + sums.counts[3];
  if (rep.total > 0) {
    rep.centroid = Centroid{double(sums.sum_x) / double(rep.total),
                            double(sums.sum_y) / double(rep.total)};
  }
  return rep;
}

bool in_dead_zone(double cx, int width, const TrackerConfig& cfg) {
  const double center = cx + 0.5;
  const double half = cfg.dead_zone_frac * width;
  return center >= width / 2.0 - half && center <= width / 2.0 + half;
}

DriveCommand steer(const QuadrantReport& rep, int width, int height, const TrackerConfig& cfg) {
  if (rep.total < cfg.min_pixels || !rep.centroid) return DriveCommand::Stop;
  if (double(rep.total) >= cfg.target_fill * double(width) * double(height))
    return DriveCommand::Stop;
  const double center = rep.centroid->x + 0.5;
  const double half = cfg.dead_zone_frac * width;
  if (center < width / 2.0 - half) return DriveCommand::Left;
  if (center > width / 2.0 + half) return DriveCommand::Right;
  return DriveCommand::Forward;
}

TrackResult track_step(const Frame& rgb, const ColorReference& ref, const TrackerConfig& cfg) {
  TrackResult r;
  r.mask = match_color(rgb, ref);
  r.report = quadrant_report(r.mask);
  r.command = steer(r.report, rgb.width(), rgb.height(), cfg);
  return r;
}

Frame tracking_overlay(const Frame& rgb, const MotionMask& mask) {
  Frame out = gray_to_rgb(to_gray(rgb));
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask.at(x, y)) out.set_rgb(x, y, {255, 0, 0});
  return out;
}

}  // namespace sentry
