#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sentry/commands.hpp"
#include "sentry/motion.hpp"
#include "sentry/protocol.hpp"

namespace sentry::centre {

/// One processed frame. Absent fields print as '-'.
struct FrameRecord {
  std::uint64_t seq = 0;
  Mode mode = Mode::PcControl;
  std::optional<double> motion_ratio;
  std::optional<DriveCommand> command;
  AlarmPhase alarm = AlarmPhase::Idle;
  bool alarm_raised = false;
};

struct RunSummary {
  std::size_t frames = 0;
  std::size_t alarms = 0;
  std::map<DriveCommand, std::size_t> commands;
};

/// Tab-separated report:
///
///   # sentry run report
///   seq  mode  motion_ratio  command  alarm  event
///   ... one line per frame ...
///   # warning: <text>          (zero or more)
///   # summary frames=N alarms=K commands=<Name>:<count>,...
///
/// motion_ratio has six decimals. The summary is derived from the records.
class RunReport {
 public:
  void add(const FrameRecord& r) { records_.push_back(r); }
  void warn(std::string message) { warnings_.push_back(std::move(message)); }

  const std::vector<FrameRecord>& records() const noexcept { return records_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  RunSummary summary() const;

  std::string to_text() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<FrameRecord> records_;
  std::vector<std::string> warnings_;
};

inline constexpr const char* kReportColumns = "seq\tmode\tmotion_ratio\tcommand\talarm\tevent";

}  // namespace sentry::centre
