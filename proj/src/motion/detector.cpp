#include <string>

#include "sentry/kernels.hpp"
#include "sentry/motion.hpp"

namespace sentry {

namespace {

void require_gray(const Frame& f) {
  if (f.format() != PixelFormat::Gray8) throw FormatError("detector expects GRAY8 frames");
}

void require_same_dims(const Frame& a, const Frame& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw DimensionMismatch("frame dimensions differ");
}

}  // namespace

void DetectorConfig::validate() const {
  if (tau <= 0 || tau >= 255) throw ParameterError("tau must be in (0, 255)");
  if (!(min_ratio > 0.0 && min_ratio < 1.0)) throw ParameterError("min_ratio must be in (0, 1)");
  if (persist_k < 1) throw ParameterError("persist_k must be at least 1");
}

void FrameWindow::push(Frame gray) {
  require_gray(gray);
  if (!frames_.empty()) {
    const Frame& last = frames_.back();
    require_same_dims(last, gray);
    if (gray.seq() <= last.seq())
      throw ParameterError("window frames must have increasing seq (got " +
                           std::to_string(gray.seq()) + " after " + std::to_string(last.seq()) +
                           ")");
    if (gray.seq() != last.seq() + 1) {
      frames_.clear();
      ++restarts_;
    }
  }
  frames_.push_back(std::move(gray));
  if (frames_.size() > kDepth) frames_.pop_front();
}

MotionMask frame_difference(const Frame& a, const Frame& b, int tau) {
  require_gray(a);
  require_gray(b);
  require_same_dims(a, b);
  MotionMask m(a.width(), a.height());
  kernels::parallel::abs_diff_threshold(a.data(), b.data(), tau, m.bits());
  return m;
}

MotionMask four_frame_mask(const FrameWindow& w, const DetectorConfig& cfg) {
  if (!w.warm()) throw NotReady("four-frame window is not warm");
  MotionMask m(w[0].width(), w[0].height());
  kernels::parallel::four_frame_combine(w[0].data(), w[1].data(), w[2].data(), w[3].data(),
                                        cfg.tau, m.bits());
  return cfg.denoise ? denoise(m) : m;
}

BackgroundModel::BackgroundModel(const Frame& initial, double alpha)
    : width_(initial.width()), height_(initial.height()), alpha_(alpha) {
  require_gray(initial);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must be in (0, 1]");
  reference_.assign(initial.data().begin(), initial.data().end());
}

BackgroundModel::BackgroundModel(int width, int height, std::vector<double> reference,
                                 double alpha)
    : width_(width), height_(height), reference_(std::move(reference)), alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must be in (0, 1]");
  if (width < 1 || height < 1 || reference_.size() != std::size_t(width) * std::size_t(height))
    throw ParameterError("reference length does not match dimensions");
  for (double v : reference_)
    if (!(v >= 0.0 && v <= 255.0)) throw ParameterError("reference values must be in [0, 255]");
}

std::pair<MotionMask, BackgroundModel> bg_step(BackgroundModel model, const Frame& f, int tau) {
  require_gray(f);
  if (f.width() != model.width_ || f.height() != model.height_)
    throw DimensionMismatch("frame dimensions differ from background model");
  MotionMask m(f.width(), f.height());
  kernels::parallel::background_update(model.reference_, f.data(), model.alpha_, tau, m.bits());
  return {std::move(m), std::move(model)};
}

}  // namespace sentry
