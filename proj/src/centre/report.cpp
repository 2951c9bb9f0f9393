#include "sentry/centre/report.hpp"

#include <cstdio>
#include <span>

#include "sentry/imaging.hpp"

namespace sentry::centre {

RunSummary RunReport::summary() const {
  RunSummary s;
  s.frames = records_.size();
  for (const auto& r : records_) {
    if (r.alarm_raised) ++s.alarms;
    if (r.command) ++s.commands[*r.command];
  }
  return s;
}

std::string RunReport::to_text() const {
  std::string out = "# sentry run report\n";
  out += kReportColumns;
  out += '\n';
  char ratio[32];
  for (const auto& r : records_) {
    out += std::to_string(r.seq);
    out += '\t';
    out += to_string(r.mode);
    out += '\t';
    if (r.motion_ratio) {
      std::snprintf(ratio, sizeof ratio, "%.6f", *r.motion_ratio);
      out += ratio;
    } else {
      out += '-';
    }
    out += '\t';
    out += r.command ? std::string(to_string(*r.command)) : "-";
    out += '\t';
    out += to_string(r.alarm);
    out += '\t';
    out += r.alarm_raised ? "ALARM_RAISED" : "-";
    out += '\n';
  }
  for (const auto& w : warnings_) out += "# warning: " + w + "\n";

  const auto s = summary();
  out += "# summary frames=" + std::to_string(s.frames) + " alarms=" + std::to_string(s.alarms) +
         " commands=";
  bool first = true;
  for (const auto& [cmd, n] : s.commands) {
    if (!first) out += ',';
    first = false;
    out += std::string(to_string(cmd)) + ":" + std::to_string(n);
  }
  if (first) out += '-';
  out += '\n';
  return out;
}

void RunReport::save(const std::filesystem::path& path) const {
  const auto text = to_text();
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace sentry::centre
