#include <cmath>
#include <cstdio>

#include "sentry/centre/batch.hpp"
#include "sentry/centre/scene_directives.hpp"

namespace sentry::centre {

std::string_view to_string(TraceEnd e) {
  switch (e) {
    case TraceEnd::Reached: return "reached";
    case TraceEnd::Lost: return "lost";
    case TraceEnd::MaxSteps: return "max_steps";
  }
  return "?";
}

int TraceResult::longest_dead_zone_run() const {
  int best = 0;
  int run = 0;
  for (const auto& p : trajectory) {
    run = p.in_dead_zone ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

std::optional<int> TraceResult::first_dead_zone_run(int length) const {
  int run = 0;
  for (const auto& p : trajectory) {
    run = p.in_dead_zone ? run + 1 : 0;
    if (run >= length) return p.step - run + 1;
  }
  return std::nullopt;
}

TraceResult trace(const SimScene& sim, const TraceOptions& opt) {
  validate_scene(sim);
  opt.tracker.validate();
  if (sim.scene.objects.empty()) throw ParameterError("trace needs a scene with at least one object");
  if (opt.max_steps <= 0) throw ParameterError("max_steps must be positive");

  TraceResult r;
  RoverState rover = sim.rover;
  const double dt = 1.0 / sim.frame_rate;
  double clock_s = 0.0;

  for (int i = 0; i < opt.max_steps; ++i) {
    const auto now_ms = static_cast<std::int64_t>(std::llround(clock_s * 1000.0));
    const Frame frame = render_scene(sim.scene, rover.pose, sim.width, sim.height,
                                     {rover.lights, rover.night_vision}, std::uint64_t(now_ms),
                                     std::uint64_t(i));
    const TrackResult tr = track_step(frame, opt.color, opt.tracker);

    TracePoint p{i, rover.pose, tr.command, tr.report.total, tr.report.centroid, false};
    if (tr.report.centroid) p.in_dead_zone = in_dead_zone(tr.report.centroid->x, sim.width, opt.tracker);
    r.trajectory.push_back(p);
    r.commands.push_back(tr.command);
    FrameRecord rec;
    rec.seq = std::uint64_t(i);
    rec.mode = Mode::Tracing;
    rec.command = tr.command;
    r.report.add(rec);

    const auto decoded = r.link.transmit(tr.command);
    if (const auto* cmd = std::get_if<Command>(&decoded)) rover = apply_command(rover, *cmd, now_ms);

    if (tr.command == DriveCommand::Stop) {
      const bool lost = !tr.report.centroid || tr.report.total < opt.tracker.min_pixels;
      r.end = lost ? TraceEnd::Lost : TraceEnd::Reached;
      break;
    }
    rover = step(rover, dt);
    clock_s += dt;
  }
  if (r.end == TraceEnd::MaxSteps) r.report.warn("max_steps reached before the loop stopped");
  r.report.warn(std::string("trace ended: ") + std::string(to_string(r.end)));
  r.final_rover = rover;
  return r;
}

std::string trajectory_text(const TraceResult& r) {
  std::string out = "step\tx\ty\theading_deg\tcommand\tmatched\tcx\tdead_zone\n";
  char buf[160];
  for (const auto& p : r.trajectory) {
    char cx[32] = "-";
    if (p.centroid) std::snprintf(cx, sizeof cx, "%.3f", p.centroid->x);
    std::snprintf(buf, sizeof buf, "%d\t%.4f\t%.4f\t%.3f\t%s\t%zu\t%s\t%d\n", p.step, p.pose.x, p.pose.y,
                  rad_to_deg(p.pose.heading), std::string(to_string(p.command)).c_str(), p.matched, cx,
                  p.in_dead_zone ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace sentry::centre
