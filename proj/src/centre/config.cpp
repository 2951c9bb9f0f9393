#include "sentry/centre/config.hpp"

#include <cerrno>
#include <cmath>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include "sentry/imaging.hpp"

namespace sentry::centre {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const char* end = s.data() + s.size();
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for double is incomplete in libstdc++ 11.
    std::string tmp(s);
    char* stop = nullptr;
    errno = 0;
    out = std::strtod(tmp.c_str(), &stop);
    return !tmp.empty() && stop == tmp.c_str() + tmp.size() && errno == 0;
  } else {
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && p == end;
  }
}

class LineError {
 public:
  explicit LineError(int line) : line_(line) {}
  [[noreturn]] void operator()(const std::string& what) const {
    throw ConfigError("config line " + std::to_string(line_) + ": " + what);
  }

 private:
  int line_;
};

template <typename T>
T number(std::string_view key, std::string_view value, const LineError& fail) {
  T v{};
  if (!parse_number(value, v)) fail(std::string(key) + ": not a number: '" + std::string(value) + "'");
  return v;
}

bool boolean(std::string_view key, std::string_view value, const LineError& fail) {
  if (value == "true" || value == "on" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "off" || value == "0" || value == "no") return false;
  fail(std::string(key) + ": expected true/false");
}

Rgb color_triplet(std::string_view value, const LineError& fail) {
  Rgb out{};
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const auto comma = value.find(',', start);
    if ((i < 2) != (comma != std::string_view::npos)) fail("color: expected R,G,B");
    const auto part = trim(value.substr(start, comma == std::string_view::npos ? value.npos : comma - start));
    const int v = number<int>("color", part, fail);
    if (v < 0 || v > 255) fail("color: component out of range 0-255");
    out[std::size_t(i)] = std::uint8_t(v);
    start = comma + 1;
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
  std::filesystem::path p{std::string(value)};
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

void CentreConfig::validate() const {
  if (shared_secret.empty()) throw ConfigError("shared_secret is required");
  if (alarm_password.empty()) throw ConfigError("alarm_password is required");
  if (!(frame_rate > 0.0) || frame_rate > 1000.0) throw ConfigError("frame_rate must be in (0, 1000]");
  if (scene_file.has_value() == sequence_file.has_value())
    throw ConfigError("exactly one of scene_file / sequence_file must be set");
  if (watchdog_timeout_ms <= 0) throw ConfigError("watchdog_timeout_ms must be positive");
  if (listen_port == 65535) throw ConfigError("listen_port + 1 must be a valid port");
  try {
    detector.validate();
    tracker.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (color.tolerance < 0 || color.tolerance > 255) throw ConfigError("tolerance must be 0-255");
}

CentreConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  CentreConfig cfg;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const LineError fail(line_no);

    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) fail("empty key");

    if (key == "listen_port") {
      const int port = number<int>(key, value, fail);
      if (port < 0 || port > 65534) fail("listen_port out of range");
      cfg.listen_port = std::uint16_t(port);
    } else if (key == "shared_secret") {
      cfg.shared_secret = std::string(value);
    } else if (key == "alarm_password") {
      cfg.alarm_password = std::string(value);
    } else if (key == "tau") {
      cfg.detector.tau = number<int>(key, value, fail);
    } else if (key == "min_ratio") {
      cfg.detector.min_ratio = number<double>(key, value, fail);
    } else if (key == "persist_k") {
      cfg.detector.persist_k = number<int>(key, value, fail);
    } else if (key == "denoise") {
      cfg.detector.denoise = boolean(key, value, fail);
    } else if (key == "dead_zone_frac") {
      cfg.tracker.dead_zone_frac = number<double>(key, value, fail);
    } else if (key == "min_pixels") {
      cfg.tracker.min_pixels = number<std::size_t>(key, value, fail);
    } else if (key == "target_fill") {
      cfg.tracker.target_fill = number<double>(key, value, fail);
    } else if (key == "color") {
      cfg.color.rgb = color_triplet(value, fail);
    } else if (key == "tolerance") {
      cfg.color.tolerance = number<int>(key, value, fail);
    } else if (key == "frame_rate") {
      cfg.frame_rate = number<double>(key, value, fail);
    } else if (key == "scene_file") {
      cfg.scene_file = resolve(base_dir, value);
    } else if (key == "sequence_file") {
      cfg.sequence_file = resolve(base_dir, value);
    } else if (key == "watchdog_timeout_ms") {
      cfg.watchdog_timeout_ms = number<std::int64_t>(key, value, fail);
    } else if (key == "mode") {
      const auto m = parse_mode(value);
      if (!m) fail("unknown mode '" + std::string(value) + "'");
      cfg.initial_mode = *m;
    } else if (key == "console_dir") {
      cfg.console_dir = resolve(base_dir, value);
    } else {
      fail("unknown key '" + std::string(key) + "'");
    }
  }
  return cfg;
}

CentreConfig load_config(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  CentreConfig cfg = parse_config(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                                  path.parent_path());
  apply_environment(cfg);
  cfg.validate();
  return cfg;
}

void apply_environment(CentreConfig& cfg) {
  if (const char* s = std::getenv("SENTRY_SECRET"); s != nullptr && *s != '\0') cfg.shared_secret = s;
}

// ---- directive files --------------------------------------------------------

std::vector<Directive> parse_directives(std::string_view text) {
  std::vector<Directive> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream words{std::string(strip_comment(raw))};
    Directive d;
    d.line = line_no;
    if (!(words >> d.name)) continue;
    for (std::string w; words >> w;) d.args.push_back(w);
    out.push_back(std::move(d));
  }
  return out;
}

namespace {
[[noreturn]] void directive_error(const Directive& d, const std::string& what) {
  throw ParameterError("line " + std::to_string(d.line) + " (" + d.name + "): " + what);
}
}  // namespace

void expect_args(const Directive& d, std::size_t min, std::size_t max) {
  if (d.args.size() < min || d.args.size() > max) {
    directive_error(d, min == max ? "expected " + std::to_string(min) + " arguments"
                                  : "expected " + std::to_string(min) + " to " +
                                        std::to_string(max) + " arguments");
  }
}

double to_double(const Directive& d, std::size_t i) {
  double v = 0.0;
  if (i >= d.args.size() || !parse_number(d.args[i], v) || !std::isfinite(v))
    directive_error(d, "argument " + std::to_string(i + 1) + " is not a number");
  return v;
}

long long to_integer(const Directive& d, std::size_t i) {
  long long v = 0;
  if (i >= d.args.size() || !parse_number(d.args[i], v))
    directive_error(d, "argument " + std::to_string(i + 1) + " is not an integer");
  return v;
}

bool to_flag(const Directive& d, std::size_t i) {
  if (i < d.args.size()) {
    const auto& a = d.args[i];
    if (a == "on" || a == "true" || a == "1") return true;
    if (a == "off" || a == "false" || a == "0") return false;
  }
  directive_error(d, "argument " + std::to_string(i + 1) + " must be on/off");
}

}  // namespace sentry::centre
