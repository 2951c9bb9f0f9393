#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <system_error>

#include "sentry/centre/batch.hpp"
#include "sentry/centre/config.hpp"
#include "sentry/centre/server.hpp"

namespace {

using namespace sentry;
using namespace sentry::centre;

enum Exit : int { kOk = 0, kUsage = 1, kIo = 2, kConfig = 3 };

std::string read_text(const std::filesystem::path& p) {
  const auto bytes = read_file_bytes(p);
  return std::string(bytes.begin(), bytes.end());
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  write_file_bytes(p, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

ColorReference parse_color(const std::string& text, int tol) {
  ColorReference ref;
  ref.tolerance = tol;
  int r = -1, g = -1, b = -1;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%d,%d,%d%c", &r, &g, &b, &extra) != 3 || r < 0 || r > 255 || g < 0 ||
      g > 255 || b < 0 || b > 255)
    throw ParameterError("--color expects R,G,B with components 0-255");
  if (tol < 0 || tol > 255) throw ParameterError("--tol must be 0-255");
  ref.rgb = {std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)};
  return ref;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sentry: motion detection, object tracing and rover teleoperation control centre"};
  app.require_subcommand(1);

  std::filesystem::path config_path, record_path;
  double duration = 0.0;
  auto* serve = app.add_subcommand("serve", "Run the control centre service");
  serve->add_option("--config", config_path, "Config file (key = value)")->required();
  serve->add_option("--record", record_path, "Record captured frames to an SRSEQ1 file");
  serve->add_option("--duration", duration, "Stop after this many seconds")->check(CLI::PositiveNumber);

  std::filesystem::path in_path, out_path, mask_dir;
  DetectorConfig det;
  bool no_denoise = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Run the motion detector over a sequence");
  analyze_cmd->add_option("--in", in_path, "SRSEQ1 input")->required();
  analyze_cmd->add_option("--out", out_path, "Report output")->required();
  analyze_cmd->add_option("--dump-masks", mask_dir, "Directory for mask_<seq>.pgm dumps");
  analyze_cmd->add_option("--tau", det.tau, "Difference threshold")->capture_default_str();
  analyze_cmd->add_option("--min-ratio", det.min_ratio, "Alarm pixel ratio")->capture_default_str();
  analyze_cmd->add_option("--persist-k", det.persist_k, "Consecutive hits to alarm")->capture_default_str();
  analyze_cmd->add_flag("--no-denoise", no_denoise, "Skip the 3x3 erosion");

  std::filesystem::path scene_path, trajectory_path;
  std::string color_text = "255,0,0";
  int tol = 60;
  TraceOptions topt;
  auto* trace_cmd = app.add_subcommand("trace", "Run the closed tracking loop over a scene");
  trace_cmd->add_option("--scene", scene_path, "Scene file")->required();
  trace_cmd->add_option("--color", color_text, "Object color R,G,B")->capture_default_str();
  trace_cmd->add_option("--tol", tol, "Color match tolerance")->capture_default_str();
  trace_cmd->add_option("--out", out_path, "Report output")->required();
  trace_cmd->add_option("--trajectory", trajectory_path, "Trajectory log output");
  trace_cmd->add_option("--max-steps", topt.max_steps, "Step limit")->capture_default_str();
  trace_cmd->add_option("--dead-zone", topt.tracker.dead_zone_frac, "Dead zone half-width / width")
      ->capture_default_str();
  trace_cmd->add_option("--min-pixels", topt.tracker.min_pixels, "Matched pixels to keep tracking")
      ->capture_default_str();
  trace_cmd->add_option("--target-fill", topt.tracker.target_fill, "Fill fraction that counts as reached")
      ->capture_default_str();

  std::filesystem::path spec_path;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("gen-dataset", "Generate a synthetic SRSEQ1 sequence");
  gen->add_option("--spec", spec_path, "Dataset spec file")->required();
  gen->add_option("--seed", seed, "Noise seed")->required();
  gen->add_option("--out", out_path, "SRSEQ1 output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*serve) {
      CentreConfig cfg = load_config(config_path);
      ServerOptions opts;
      opts.handle_signals = true;
      if (duration > 0.0) opts.duration_s = duration;
      Server server(Centre::from_config(cfg), opts);
      if (!record_path.empty()) server.centre().start_recording(record_path);
      std::cerr << "sentry: protocol on tcp/" << server.tcp_port() << ", console on http/ws "
                << server.ws_port() << "\n";
      server.run();
      server.centre().stop_recording();
    } else if (*analyze_cmd) {
      det.denoise = !no_denoise;
      det.validate();
      std::optional<std::filesystem::path> dump;
      if (!mask_dir.empty()) dump = mask_dir;
      const auto report = analyze_file(in_path, out_path, det, dump);
      for (const auto& w : report.warnings()) std::cerr << "warning: " << w << "\n";
      const auto s = report.summary();
      std::cout << "frames=" << s.frames << " alarms=" << s.alarms << "\n";
    } else if (*trace_cmd) {
      topt.color = parse_color(color_text, tol);
      const SimScene scene = load_scene(scene_path);
      const TraceResult r = trace(scene, topt);
      r.report.save(out_path);
      if (!trajectory_path.empty()) write_text(trajectory_path, trajectory_text(r));
      std::cout << "end=" << to_string(r.end) << " steps=" << r.trajectory.size()
                << " dead_zone_run=" << r.longest_dead_zone_run() << "\n";
    } else if (*gen) {
      const DatasetSpec spec = parse_dataset_spec(read_text(spec_path));
      save_sequence(out_path, gen_dataset(spec, seed));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ParameterError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kConfig;
  } catch (const ParseError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::system_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
