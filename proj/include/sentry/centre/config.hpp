#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sentry/motion.hpp"
#include "sentry/protocol.hpp"
#include "sentry/rover.hpp"
#include "sentry/tracker.hpp"

namespace sentry::centre {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CentreConfig {
  std::uint16_t listen_port = proto::kDefaultPort;  // 0 picks ephemeral ports
  std::string shared_secret;
  std::string alarm_password;
  DetectorConfig detector;
  TrackerConfig tracker;
  ColorReference color;
  double frame_rate = 10.0;
  std::optional<std::filesystem::path> scene_file;
  std::optional<std::filesystem::path> sequence_file;
  std::int64_t watchdog_timeout_ms = kDefaultWatchdogMs;
  Mode initial_mode = Mode::PcControl;
  std::filesystem::path console_dir;

  void validate() const;
};

/// Parses flat `key = value` lines; '#' starts a comment. Relative paths are
/// resolved against `base_dir`. Throws ConfigError naming the line.
CentreConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

/// Reads and parses a config file, then applies the environment. An
/// unreadable file is an I/O error, not a ConfigError.
CentreConfig load_config(const std::filesystem::path& path);

/// SENTRY_SECRET, when set, replaces shared_secret.
void apply_environment(CentreConfig& cfg);

/// Whitespace-separated directive line: `name arg arg ...`.
struct Directive {
  std::string name;
  std::vector<std::string> args;
  int line = 0;
};

/// Splits text into directives, dropping blank lines and '#' comments.
std::vector<Directive> parse_directives(std::string_view text);

double to_double(const Directive& d, std::size_t i);
long long to_integer(const Directive& d, std::size_t i);
bool to_flag(const Directive& d, std::size_t i);
void expect_args(const Directive& d, std::size_t min, std::size_t max);

}  // namespace sentry::centre
