#include <cstdio>

#include "sentry/centre/batch.hpp"

namespace sentry::centre {

namespace {
// The batch detector never disarms; the password only satisfies AlarmState.
constexpr std::string_view kBatchPassword = "batch";
}  // namespace

RunReport analyze(const FrameSequence& seq, const DetectorConfig& cfg, const MaskSink& masks) {
  cfg.validate();
  RunReport report;
  FrameWindow window;
  AlarmState alarm = start_monitoring(AlarmState::idle(kBatchPassword));

  for (std::size_t i = 0; i < seq.size(); ++i) {
    const Frame& f = seq[i];
    const std::size_t restarts = window.restarts();
    window.push(f.format() == PixelFormat::Gray8 ? f : to_gray(f));
    if (window.restarts() != restarts)
      report.warn("seq gap before frame " + std::to_string(i) + " (seq " + std::to_string(f.seq()) +
                  "); detector window restarted");

    FrameRecord rec;
    rec.seq = f.seq();
    rec.mode = Mode::MotionDetection;
    if (window.warm()) {
      const MotionMask mask = four_frame_mask(window, cfg);
      if (masks) masks(f.seq(), mask);
      rec.motion_ratio = motion_ratio(mask);
      auto stepped = alarm_step(std::move(alarm), mask, cfg);
      alarm = std::move(stepped.state);
      rec.alarm_raised = !stepped.events.empty();
    }
    rec.alarm = alarm.phase;
    report.add(rec);
  }
  if (seq.size() < FrameWindow::kDepth)
    report.warn("sequence has " + std::to_string(seq.size()) +
                " frames; the detector needs 4, no detector output");
  return report;
}

RunReport analyze_file(const std::filesystem::path& in, const std::filesystem::path& out,
                       const DetectorConfig& cfg,
                       const std::optional<std::filesystem::path>& mask_dir) {
  const FrameSequence seq = load_sequence(in);
  MaskSink sink;
  if (mask_dir) {
    std::filesystem::create_directories(*mask_dir);
    sink = [&](std::uint64_t s, const MotionMask& m) {
      char name[40];
      std::snprintf(name, sizeof name, "mask_%06llu.pgm", static_cast<unsigned long long>(s));
      save_pnm(*mask_dir / name, m.to_frame());
    };
  }
  RunReport report = analyze(seq, cfg, sink);
  report.save(out);
  return report;
}

}  // namespace sentry::centre
