#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "sentry/centre/batch.hpp"
#include "sentry/centre/config.hpp"
#include "sentry/centre/core.hpp"
#include "sentry/centre/report.hpp"
#include "support.hpp"

using namespace sentry;
using namespace sentry::centre;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("sentry_centre_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path path;
};

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

// Moves fast enough for the four-frame rule to confirm it: each pixel
// changes again two frames after it first changes.
SquareMotionParams triggering_square() {
  return {.width = 64, .height = 64, .side = 16, .start_x = 0, .start_y = 24, .velocity_x = 8,
          .frames = 7};
}

SimScene scene_with(double distance, double bearing_deg, Rgb color = {255, 0, 0}) {
  SimScene s;
  s.width = 640;
  s.height = 480;
  s.frame_rate = 40.0;
  SceneObject o{0.0, 0.0, 0.5, color};
  point_at_bearing(s.rover.pose, distance, deg_to_rad(bearing_deg), o.x, o.y);
  s.scene.objects.push_back(o);
  return s;
}

TraceOptions tracking_options() {
  TraceOptions opt;
  opt.tracker.dead_zone_frac = 0.05;
  return opt;
}

CentreConfig base_config() {
  CentreConfig cfg;
  cfg.shared_secret = "s3cret";
  cfg.alarm_password = "open sesame";
  cfg.scene_file = "unused";
  return cfg;
}

Centre sim_centre(CentreConfig cfg = base_config(), SimScene scene = scene_with(3.0, 0.0)) {
  const RoverState rover = scene.rover;
  return Centre(std::move(cfg), std::make_unique<SimulatedCamera>(std::move(scene)), rover);
}

Centre replay_centre(FrameSequence seq, CentreConfig cfg = base_config()) {
  return Centre(std::move(cfg), std::make_unique<ReplayCamera>(std::move(seq)));
}

std::vector<proto::ControlMessage> drain(Centre& c, SessionId id) {
  std::vector<proto::ControlMessage> out;
  while (auto m = c.outbound(id).pop()) out.push_back(std::move(*m));
  return out;
}

SessionId login(Centre& c) {
  const SessionId id = c.open_session();
  REQUIRE(c.receive(id, proto::hello("s3cret"), 0));
  const auto replies = drain(c, id);
  REQUIRE(replies.size() == 1);
  REQUIRE(replies[0].type == proto::MessageType::HelloOk);
  return id;
}

}  // namespace

// ---- config -------------------------------------------------------------------

TEST_CASE("parse_config reads every key") {
  const auto cfg = parse_config(R"(# control centre
listen_port = 9000
shared_secret = abc def
alarm_password = pw   # trailing comment
tau = 30
min_ratio = 0.01
persist_k = 3
denoise = off
dead_zone_frac = 0.2
min_pixels = 40
target_fill = 0.05
color = 10, 20 ,30
tolerance = 15
frame_rate = 12.5
scene_file = scenes/a.scene
watchdog_timeout_ms = 1500
mode = Tracing
console_dir = /srv/console
)",
                                "/etc/sentry");
  CHECK(cfg.listen_port == 9000);
  CHECK(cfg.shared_secret == "abc def");
  CHECK(cfg.alarm_password == "pw");
  CHECK(cfg.detector.tau == 30);
  CHECK(cfg.detector.min_ratio == doctest::Approx(0.01));
  CHECK(cfg.detector.persist_k == 3);
  CHECK_FALSE(cfg.detector.denoise);
  CHECK(cfg.tracker.dead_zone_frac == doctest::Approx(0.2));
  CHECK(cfg.tracker.min_pixels == 40);
  CHECK(cfg.tracker.target_fill == doctest::Approx(0.05));
  CHECK(cfg.color.rgb == Rgb{10, 20, 30});
  CHECK(cfg.color.tolerance == 15);
  CHECK(cfg.frame_rate == doctest::Approx(12.5));
  CHECK(cfg.scene_file == fs::path("/etc/sentry/scenes/a.scene"));
  CHECK_FALSE(cfg.sequence_file);
  CHECK(cfg.watchdog_timeout_ms == 1500);
  CHECK(cfg.initial_mode == Mode::Tracing);
  CHECK(cfg.console_dir == fs::path("/srv/console"));
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("parse_config rejects bad input with the line number") {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("a = 1\n").find("line 1") != std::string::npos);
  CHECK(message("\n\ntau 25\n").find("line 3") != std::string::npos);
  CHECK(message("tau = x\n").find("not a number") != std::string::npos);
  CHECK(message("listen_port = 70000\n").find("out of range") != std::string::npos);
  CHECK(message("color = 1,2\n").find("R,G,B") != std::string::npos);
  CHECK(message("color = 1,2,300\n").find("0-255") != std::string::npos);
  CHECK(message("mode = Dancing\n").find("unknown mode") != std::string::npos);
  CHECK(message("denoise = maybe\n").find("true/false") != std::string::npos);
}

TEST_CASE("CentreConfig::validate") {
  CentreConfig cfg = base_config();
  CHECK_NOTHROW(cfg.validate());
  SUBCASE("exactly one frame source") {
    cfg.sequence_file = "x.seq";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.scene_file.reset();
    CHECK_NOTHROW(cfg.validate());
    cfg.sequence_file.reset();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("frame rate positive") {
    cfg.frame_rate = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("secrets required") {
    cfg.shared_secret.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("detector and tracker ranges") {
    cfg.detector.persist_k = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("tracker dead zone") {
    cfg.tracker.dead_zone_frac = 0.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
}

TEST_CASE("load_config applies SENTRY_SECRET") {
  TempDir dir;
  write_text(dir.path / "c.conf", "shared_secret = from-file\nalarm_password = pw\nsequence_file = s.seq\n");
  ::unsetenv("SENTRY_SECRET");
  CHECK(load_config(dir.path / "c.conf").shared_secret == "from-file");
  CHECK(load_config(dir.path / "c.conf").sequence_file == dir.path / "s.seq");
  ::setenv("SENTRY_SECRET", "from-env", 1);
  CHECK(load_config(dir.path / "c.conf").shared_secret == "from-env");
  ::unsetenv("SENTRY_SECRET");
  CHECK_THROWS_AS(load_config(dir.path / "missing.conf"), std::ios_base::failure);
}

// ---- report ---------------------------------------------------------------------

TEST_CASE("RunReport text layout and summary") {
  RunReport r;
  FrameRecord a;
  a.seq = 0;
  a.mode = Mode::MotionDetection;
  a.alarm = AlarmPhase::Monitoring;
  r.add(a);
  FrameRecord b = a;
  b.seq = 1;
  b.motion_ratio = 0.0125;
  b.alarm = AlarmPhase::Alarm;
  b.alarm_raised = true;
  r.add(b);
  FrameRecord c;
  c.seq = 2;
  c.mode = Mode::Tracing;
  c.command = DriveCommand::Left;
  r.add(c);
  c.seq = 3;
  r.add(c);
  r.warn("something odd");

  const auto s = r.summary();
  CHECK(s.frames == 4);
  CHECK(s.alarms == 1);
  CHECK(s.commands.at(DriveCommand::Left) == 2);

  const std::string text = r.to_text();
  CHECK(text.rfind("# sentry run report\nseq\tmode\tmotion_ratio\tcommand\talarm\tevent\n", 0) == 0);
  CHECK(text.find("0\tMotionDetection\t-\t-\tMONITORING\t-\n") != std::string::npos);
  CHECK(text.find("1\tMotionDetection\t0.012500\t-\tALARM\tALARM_RAISED\n") != std::string::npos);
  CHECK(text.find("3\tTracing\t-\tLeft\tIDLE\t-\n") != std::string::npos);
  CHECK(text.find("# warning: something odd\n") != std::string::npos);
  CHECK(text.find("# summary frames=4 alarms=1 commands=Left:2\n") != std::string::npos);
  CHECK(RunReport{}.to_text().find("commands=-") != std::string::npos);
}

// ---- analyze ---------------------------------------------------------------------

TEST_CASE("analyze: static sequence raises nothing") {
  SquareMotionParams p{.width = 32, .height = 32, .side = 8, .start_x = 4, .start_y = 4, .frames = 12};
  const auto report = analyze(synth_motion_sequence(p), DetectorConfig{});
  REQUIRE(report.records().size() == 12);
  CHECK(report.summary().alarms == 0);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(report.records()[i].seq == i);
    CHECK(report.records()[i].alarm == AlarmPhase::Monitoring);
    CHECK(report.records()[i].motion_ratio.has_value() == (i >= 3));
    if (i >= 3) CHECK(*report.records()[i].motion_ratio == 0.0);
  }
  CHECK(report.warnings().empty());
}

TEST_CASE("analyze: moving square alarms once at the ground-truth frame") {
  const auto p = triggering_square();
  const DetectorConfig cfg;
  const auto expected = oracle::truth_alarm_frames(p, cfg.min_ratio, cfg.persist_k, cfg.denoise);
  REQUIRE(expected.size() == 1);

  const auto report = analyze(synth_motion_sequence(p), cfg);
  std::vector<int> raised;
  for (const auto& r : report.records())
    if (r.alarm_raised) raised.push_back(int(r.seq));
  CHECK(raised == expected);
  CHECK(report.summary().alarms == 1);
  CHECK(report.records().back().alarm == AlarmPhase::Alarm);
}

TEST_CASE("analyze: masks equal the per-pixel oracle") {
  const auto p = triggering_square();
  const auto seq = synth_motion_sequence(p);
  std::vector<std::pair<std::uint64_t, MotionMask>> masks;
  DetectorConfig cfg;
  cfg.denoise = false;
  analyze(seq, cfg, [&](std::uint64_t s, const MotionMask& m) { masks.emplace_back(s, m); });
  REQUIRE(masks.size() == seq.size() - 3);
  for (const auto& [s, m] : masks) {
    const auto t = std::size_t(s);
    const auto expected = oracle::four_frame_rule(seq[t - 3], seq[t - 2], seq[t - 1], seq[t], cfg.tau);
    CHECK(std::vector<std::uint8_t>(m.bits().begin(), m.bits().end()) == expected);
  }
}

TEST_CASE("analyze: short sequence is reported cold with a warning") {
  SquareMotionParams p{.width = 16, .height = 16, .side = 4, .velocity_x = 2, .frames = 3};
  const auto report = analyze(synth_motion_sequence(p), DetectorConfig{});
  REQUIRE(report.records().size() == 3);
  for (const auto& r : report.records()) CHECK_FALSE(r.motion_ratio);
  REQUIRE(report.warnings().size() == 1);
  CHECK(report.warnings()[0].find("needs 4") != std::string::npos);
  CHECK(analyze(FrameSequence{}, DetectorConfig{}).records().empty());
}

TEST_CASE("analyze: a seq gap restarts the window and is reported") {
  FrameSequence seq;
  std::mt19937_64 rng(5);
  for (std::uint64_t s : {0, 1, 2, 3, 4, 9, 10, 11, 12})
    seq.push_back(testing::random_frame(rng, 8, 8, PixelFormat::Gray8, s));
  const auto report = analyze(seq, DetectorConfig{});
  REQUIRE(report.warnings().size() == 1);
  CHECK(report.warnings()[0].find("seq 9") != std::string::npos);
  CHECK_FALSE(report.records()[5].motion_ratio);  // seq 9: cold again
  CHECK(report.records()[8].motion_ratio);        // seq 12: warm
}

TEST_CASE("analyze_file is deterministic and dumps masks") {
  TempDir dir;
  save_sequence(dir.path / "in.seq", synth_motion_sequence(triggering_square()));
  analyze_file(dir.path / "in.seq", dir.path / "a.tsv", DetectorConfig{}, dir.path / "masks");
  analyze_file(dir.path / "in.seq", dir.path / "b.tsv", DetectorConfig{});
  CHECK(read_file_bytes(dir.path / "a.tsv") == read_file_bytes(dir.path / "b.tsv"));
  const Frame m3 = load_pnm(dir.path / "masks" / "mask_000003.pgm");
  CHECK(m3.format() == PixelFormat::Gray8);
  CHECK(m3.width() == 64);
  for (auto v : m3.data()) CHECK((v == 0 || v == 255));
  CHECK(fs::exists(dir.path / "masks" / "mask_000006.pgm"));
  CHECK_FALSE(fs::exists(dir.path / "masks" / "mask_000002.pgm"));
}

TEST_CASE("analyze_file names the corrupt frame") {
  TempDir dir;
  auto bytes = encode_sequence(synth_motion_sequence(triggering_square()));
  bytes.resize(bytes.size() - 10);
  write_file_bytes(dir.path / "bad.seq", bytes);
  try {
    analyze_file(dir.path / "bad.seq", dir.path / "r.tsv", DetectorConfig{});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("frame 6") != std::string::npos);
  }
  CHECK_THROWS_AS(analyze_file(dir.path / "none.seq", dir.path / "r.tsv", DetectorConfig{}),
                  std::ios_base::failure);
}

// ---- scenes ----------------------------------------------------------------------

TEST_CASE("parse_scene") {
  const auto s = parse_scene(R"(
background 50
camera 640 480 25   # size and rate
rover 1 2 90
lights on
object 5 5 0.5 255 0 0
object_at 2 -90 0.25 0 255 0
)");
  CHECK(s.scene.background_gray == 50);
  CHECK(s.width == 640);
  CHECK(s.height == 480);
  CHECK(s.frame_rate == 25.0);
  CHECK(s.rover.pose.heading == doctest::Approx(std::numbers::pi / 2));
  CHECK(s.rover.lights);
  CHECK_FALSE(s.rover.night_vision);
  REQUIRE(s.scene.objects.size() == 2);
  // Facing +y, 90 degrees to the left is -x.
  CHECK(s.scene.objects[1].x == doctest::Approx(-1.0));
  CHECK(s.scene.objects[1].y == doctest::Approx(2.0));
  CHECK(s.scene.objects[1].color == Rgb{0, 255, 0});

  CHECK_THROWS_AS(parse_scene("camera 4 4\n"), ParameterError);
  CHECK_THROWS_AS(parse_scene("object 1 1 0 255 0 0\n"), ParameterError);
  CHECK_THROWS_AS(parse_scene("object 1 1 0.5 256 0 0\n"), ParameterError);
  CHECK_THROWS_AS(parse_scene("teleport 1 2\n"), ParameterError);
  try {
    parse_scene("\nrover 1 x 0\n");
    FAIL("expected an error");
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

// ---- trace -----------------------------------------------------------------------

TEST_CASE("trace: object dead ahead drives forward then stops at the target") {
  const auto r = trace(scene_with(3.0, 0.0), tracking_options());
  REQUIRE(r.commands.size() >= 2);
  CHECK(r.end == TraceEnd::Reached);
  for (std::size_t i = 0; i + 1 < r.commands.size(); ++i) CHECK(r.commands[i] == DriveCommand::Forward);
  CHECK(r.commands.back() == DriveCommand::Stop);
  CHECK(r.final_rover.pose.x > 1.0);
  CHECK(r.final_rover.pose.y == doctest::Approx(0.0));
}

TEST_CASE("trace: object to the left starts with Left, to the right with Right") {
  CHECK(trace(scene_with(3.0, -20.0), tracking_options()).commands.front() == DriveCommand::Left);
  CHECK(trace(scene_with(3.0, 20.0), tracking_options()).commands.front() == DriveCommand::Right);
}

TEST_CASE("trace: nothing matching stops at once") {
  const auto r = trace(scene_with(3.0, 0.0, {0, 0, 255}), tracking_options());
  CHECK(r.end == TraceEnd::Lost);
  CHECK(r.commands == std::vector<DriveCommand>{DriveCommand::Stop});
  CHECK(r.final_rover.pose == Pose{});
}

TEST_CASE("trace: every command crossed the serial link") {
  const auto r = trace(scene_with(3.0, -20.0), tracking_options());
  std::vector<Command> sent(r.commands.begin(), r.commands.end());
  CHECK(replay_transcript(r.link.transcript()) == sent);
  CHECK(r.link.rejected() == 0);
  CHECK(r.report.records().size() == r.commands.size());
}

TEST_CASE("trace: closed loop converges from any bearing within 25 degrees") {
  for (int b = -25; b <= 25; ++b) {
    CAPTURE(b);
    const auto r = trace(scene_with(3.0, b), tracking_options());
    const auto start = r.first_dead_zone_run(50);
    REQUIRE(start.has_value());
    CHECK(*start + 50 <= 300);
  }
}

TEST_CASE("trace: max_steps bounds the loop") {
  TraceOptions opt = tracking_options();
  opt.max_steps = 5;
  const auto r = trace(scene_with(3.0, 0.0), opt);
  CHECK(r.end == TraceEnd::MaxSteps);
  CHECK(r.commands.size() == 5);
  CHECK_THROWS_AS(trace(SimScene{}, opt), ParameterError);
}

TEST_CASE("trajectory_text has one line per step") {
  const auto r = trace(scene_with(3.0, -20.0), tracking_options());
  const auto text = trajectory_text(r);
  CHECK(std::size_t(std::count(text.begin(), text.end(), '\n')) == r.trajectory.size() + 1);
  CHECK(text.rfind("step\tx\ty\theading_deg\tcommand\tmatched\tcx\tdead_zone\n0\t0.0000\t0.0000\t0.000\tLeft\t", 0) == 0);
}

// ---- gen-dataset ---------------------------------------------------------------

TEST_CASE("gen_dataset: square kind") {
  const auto spec = parse_dataset_spec(R"(
kind square
width 32
height 24
side 4
start 2 3
velocity 0 0
frames 5
interval_ms 40
)");
  const auto seq = gen_dataset(spec, 1);
  REQUIRE(seq.size() == 5);
  CHECK(seq[0].width() == 32);
  CHECK(seq[4].timestamp_ms() == 160);
  for (std::size_t i = 1; i < seq.size(); ++i)
    CHECK(std::equal(seq[i].data().begin(), seq[i].data().end(), seq[0].data().begin()));
}

TEST_CASE("gen_dataset: seeded noise is deterministic and bounded") {
  const auto spec = parse_dataset_spec("kind square\nside 8\nstart 10 10\nvelocity 1 0\nframes 6\nnoise 12\n");
  const auto a = encode_sequence(gen_dataset(spec, 7));
  CHECK(a == encode_sequence(gen_dataset(spec, 7)));
  CHECK(a != encode_sequence(gen_dataset(spec, 8)));

  DatasetSpec clean = spec;
  clean.noise = 0;
  const auto noisy = gen_dataset(spec, 7);
  const auto base = gen_dataset(clean, 7);
  int max_delta = 0;
  for (std::size_t i = 0; i < noisy.size(); ++i)
    for (std::size_t k = 0; k < noisy[i].byte_size(); ++k)
      max_delta = std::max(max_delta, std::abs(int(noisy[i].data()[k]) - int(base[i].data()[k])));
  CHECK(max_delta <= 12);
  CHECK(max_delta >= 10);
}

TEST_CASE("gen_dataset: scene kind renders the driven rover") {
  const auto spec = parse_dataset_spec(R"(
kind scene
camera 64 48
rover 0 0 0
object 4 0 0.5 255 0 0
drive Forward
frames 4
interval_ms 500
)");
  const auto seq = gen_dataset(spec, 0);
  REQUIRE(seq.size() == 4);
  CHECK(seq[0].format() == PixelFormat::Rgb24);
  // Approaching the object makes it grow.
  const auto red = [](const Frame& f) {
    int n = 0;
    for (int y = 0; y < f.height(); ++y)
      for (int x = 0; x < f.width(); ++x) n += f.rgb(x, y) == Rgb{255, 0, 0};
    return n;
  };
  CHECK(red(seq[3]) > red(seq[0]));
}

TEST_CASE("gen_dataset: invalid specs") {
  CHECK_THROWS_AS(parse_dataset_spec("kind square\nside 8\nstart 60 0\nvelocity 2 0\nframes 5\n"),
                  ParameterError);
  CHECK_THROWS_AS(parse_dataset_spec("kind circle\n"), ParameterError);
  CHECK_THROWS_AS(parse_dataset_spec("kind square\ndrive Forward\n"), ParameterError);
  CHECK_THROWS_AS(parse_dataset_spec("kind scene\ndrive Sideways\n"), ParameterError);
  CHECK_THROWS_AS(parse_dataset_spec("frames 0\n"), ParameterError);
  CHECK_THROWS_AS(parse_dataset_spec("noise 300\n"), ParameterError);
}

// ---- outbound queue and recorder ---------------------------------------------

TEST_CASE("OutboundQueue keeps control messages and the newest frames") {
  OutboundQueue q;
  for (std::uint32_t i = 0; i < 10; ++i) {
    Frame f(8, 8, PixelFormat::Gray8, 0, i);
    q.push_frame(proto::frame(f));
  }
  q.push_control(proto::pong());
  q.push_control(proto::hello_ok());
  CHECK(q.frame_size() == OutboundQueue::kFrameDepth);
  CHECK(q.dropped_frames() == 6);
  CHECK(q.pop()->type == proto::MessageType::Pong);
  CHECK(q.pop()->type == proto::MessageType::HelloOk);
  for (std::uint32_t expect = 6; expect < 10; ++expect) {
    const auto m = q.pop();
    REQUIRE(m);
    CHECK(proto::frame_payload(*m).seq() == expect);
  }
  CHECK_FALSE(q.pop());
  CHECK(q.empty());
}

TEST_CASE("Recorder writes a readable SRSEQ1 file") {
  TempDir dir;
  std::mt19937_64 rng(11);
  FrameSequence expected;
  {
    Recorder rec(dir.path / "r.seq");
    for (std::uint64_t i = 0; i < 5; ++i) {
      const Frame f = testing::random_frame(rng, 9, 7, PixelFormat::Rgb24, i + 3);
      rec.append(f);
      expected.push_back(f);
    }
    CHECK_THROWS_AS(rec.append(Frame(9, 7, PixelFormat::Gray8, 0, 100)), DimensionMismatch);
    CHECK_THROWS_AS(rec.append(testing::random_frame(rng, 9, 7, PixelFormat::Rgb24, 2)), ParameterError);
    rec.finish();
    CHECK(rec.count() == 5);
  }
  CHECK(read_file_bytes(dir.path / "r.seq") == encode_sequence(expected));
  {
    Recorder empty(dir.path / "e.seq");
  }
  CHECK(load_sequence(dir.path / "e.seq").empty());
}

// ---- centre core ---------------------------------------------------------------

TEST_CASE("Centre: authenticated DRIVE reaches the rover through the serial codec") {
  Centre c = sim_centre();
  const SessionId id = login(c);
  CHECK(c.receive(id, proto::drive(DriveCommand::Forward), 10));
  CHECK(c.rover().active_drive == DriveCommand::Forward);
  CHECK(c.rover().last_command_ms == 10);
  CHECK(c.receive(id, proto::aux(AuxCommand::LightsOn), 20));
  CHECK(c.rover().lights);
  const std::vector<Command> sent{DriveCommand::Forward, AuxCommand::LightsOn};
  CHECK(replay_transcript(c.link().transcript()) == sent);
}

TEST_CASE("Centre: wrong secret and second operator") {
  Centre c = sim_centre();
  const SessionId bad = c.open_session();
  CHECK_FALSE(c.receive(bad, proto::hello("nope"), 0));
  auto replies = drain(c, bad);
  REQUIRE(replies.size() == 1);
  CHECK(proto::text_payload(replies[0]) == "auth");
  CHECK_FALSE(c.receive(bad, proto::drive(DriveCommand::Forward), 0));
  CHECK(c.rover().active_drive == DriveCommand::Stop);
  c.close_session(bad);

  const SessionId first = login(c);
  const SessionId second = c.open_session();
  CHECK_FALSE(c.receive(second, proto::hello("s3cret"), 0));
  replies = drain(c, second);
  REQUIRE(replies.size() == 1);
  CHECK(replies[0] == proto::hello_err("busy"));
  c.close_session(second);

  // Once the first operator leaves, a new one may log in.
  CHECK_FALSE(c.receive(first, proto::bye(), 0));
  c.close_session(first);
  login(c);
}

TEST_CASE("Centre: pre-auth messages never move the rover") {
  Centre c = sim_centre();
  const SessionId id = c.open_session();
  CHECK_FALSE(c.receive(id, proto::drive(DriveCommand::Forward), 0));
  CHECK(drain(c, id).empty());
  CHECK(c.link().packets() == 0);
  CHECK_FALSE(c.session_open(id));
}

TEST_CASE("Centre: MotionDetection drops operator DRIVE, teardown Stop is sent") {
  Centre c = sim_centre();
  const SessionId id = login(c);
  c.receive(id, proto::drive(DriveCommand::Forward), 0);
  REQUIRE(c.rover().active_drive == DriveCommand::Forward);

  c.receive(id, proto::mode_set(Mode::MotionDetection), 5);
  CHECK(drain(c, id) == std::vector{proto::mode_ok(Mode::MotionDetection)});
  CHECK(c.mode() == Mode::MotionDetection);
  CHECK(c.alarm_phase() == AlarmPhase::Monitoring);
  CHECK(c.rover().active_drive == DriveCommand::Stop);

  const RoverState before = c.rover();
  const auto packets = c.link().packets();
  for (auto cmd : kAllDriveCommands) c.receive(id, proto::drive(cmd), 10);
  CHECK(c.rover() == before);
  CHECK(c.link().packets() == packets);
  CHECK(c.dropped_drives() == std::size(kAllDriveCommands));
}

TEST_CASE("Centre: Tracing steers the rover and leaving it stops the rover") {
  CentreConfig cfg = base_config();
  cfg.frame_rate = 40.0;
  cfg.tracker.dead_zone_frac = 0.05;
  Centre c = sim_centre(cfg, scene_with(3.0, -20.0));
  const SessionId id = login(c);
  c.receive(id, proto::mode_set(Mode::Tracing), 0);
  c.tick(25);
  CHECK(c.rover().active_drive == DriveCommand::Left);
  CHECK(c.rover().pose.heading > 0.0);
  // Operator drive is ignored while tracing.
  c.receive(id, proto::drive(DriveCommand::Backward), 30);
  CHECK(c.rover().active_drive == DriveCommand::Left);

  c.receive(id, proto::mode_set(Mode::PcControl), 40);
  CHECK(c.mode() == Mode::PcControl);
  CHECK(c.rover().active_drive == DriveCommand::Stop);
  const auto sent = replay_transcript(c.link().transcript());
  CHECK(sent.back() == Command{DriveCommand::Stop});
}

TEST_CASE("Centre: alarm, locked mode, disarm and re-arm") {
  CentreConfig cfg = base_config();
  cfg.initial_mode = Mode::MotionDetection;
  Centre c = replay_centre(synth_motion_sequence(triggering_square()), cfg);
  std::vector<FrameRecord> records;
  c.on_record = [&](const FrameRecord& r) { records.push_back(r); };
  const SessionId id = login(c);
  CHECK(c.alarm_phase() == AlarmPhase::Monitoring);

  for (int t = 0; t < 7; ++t) c.tick(100 * t);
  CHECK(c.alarm_phase() == AlarmPhase::Alarm);
  const auto expected = oracle::truth_alarm_frames(triggering_square(), cfg.detector.min_ratio,
                                                   cfg.detector.persist_k, cfg.detector.denoise);
  auto out = drain(c, id);
  std::vector<proto::AlarmEventInfo> events;
  for (const auto& m : out)
    if (m.type == proto::MessageType::AlarmEvent) events.push_back(proto::alarm_event_payload(m));
  REQUIRE(events.size() == 1);
  CHECK(int(events[0].seq) == expected.at(0));
  CHECK(records.size() == 7);

  c.receive(id, proto::mode_set(Mode::PcControl), 800);
  CHECK(drain(c, id) == std::vector{proto::mode_ok(Mode::MotionDetection)});
  CHECK(c.mode() == Mode::MotionDetection);

  c.receive(id, proto::disarm("guess"), 900);
  CHECK(drain(c, id) == std::vector{proto::disarm_result(false)});
  CHECK(c.alarm_phase() == AlarmPhase::Alarm);
  c.receive(id, proto::disarm("open sesame"), 950);
  CHECK(drain(c, id) == std::vector{proto::disarm_result(true)});
  CHECK(c.alarm_phase() == AlarmPhase::Idle);

  c.receive(id, proto::mode_set(Mode::MotionDetection), 960);
  CHECK(c.alarm_phase() == AlarmPhase::Monitoring);
  c.receive(id, proto::mode_set(Mode::PcControl), 970);
  CHECK(c.mode() == Mode::PcControl);
  CHECK(c.alarm_phase() == AlarmPhase::Idle);
  CHECK(drain(c, id) ==
        std::vector{proto::mode_ok(Mode::MotionDetection), proto::mode_ok(Mode::PcControl)});

  c.receive(id, proto::disarm("open sesame"), 980);
  CHECK(drain(c, id) == std::vector{proto::disarm_result(false)});
}

TEST_CASE("Centre: watchdog stops a silent rover within one tick") {
  CentreConfig cfg = base_config();
  cfg.frame_rate = 10.0;
  Centre c = sim_centre(cfg);
  const SessionId id = login(c);
  c.receive(id, proto::drive(DriveCommand::Forward), 0);
  std::int64_t stopped_at = -1;
  for (std::int64_t t = 100; t <= 3000; t += 100) {
    c.tick(t);
    if (stopped_at < 0 && c.rover().active_drive == DriveCommand::Stop) stopped_at = t;
  }
  CHECK(stopped_at == 2100);
  // The rover moved for the 20 ticks before the stop.
  CHECK(c.rover().pose.x == doctest::Approx(20 * 0.1 * kLinearSpeed));
}

TEST_CASE("Centre: frames go to the Ready session only, bounded, detector sees all") {
  CentreConfig cfg = base_config();
  cfg.initial_mode = Mode::MotionDetection;
  std::mt19937_64 rng(3);
  FrameSequence seq;
  for (std::uint64_t i = 0; i < 4; ++i) seq.push_back(testing::random_frame(rng, 16, 16, PixelFormat::Gray8, i));
  Centre c = replay_centre(seq, cfg);
  std::size_t records = 0;
  c.on_record = [&](const FrameRecord&) { ++records; };
  const SessionId pending = c.open_session();
  const SessionId ready = login(c);
  for (int t = 0; t < 20; ++t) c.tick(t * 100);
  CHECK(records == 20);
  CHECK(c.frames_captured() == 20);
  CHECK(c.outbound(pending).empty());
  auto& q = c.outbound(ready);
  CHECK(q.frame_size() == OutboundQueue::kFrameDepth);
  std::uint64_t last = 0;
  while (auto m = q.pop()) {
    if (m->type != proto::MessageType::Frame) continue;
    const Frame f = proto::frame_payload(*m);
    CHECK(f.width() == 16);
    last = f.seq();
  }
  CHECK(last == 19);
}

TEST_CASE("Centre: snapshot, color reference and camera control") {
  Centre c = sim_centre();
  const SessionId id = login(c);
  c.receive(id, proto::snapshot_req(), 0);
  CHECK(drain(c, id).empty());  // nothing captured yet
  c.tick(100);
  c.outbound(id).clear_frames();
  c.receive(id, proto::snapshot_req(), 110);
  auto out = drain(c, id);
  REQUIRE(out.size() == 1);
  CHECK(out[0].type == proto::MessageType::Snapshot);
  // FRAME/SNAPSHOT headers carry seq but not the timestamp.
  Frame expected = *c.last_frame();
  expected.set_stamp(0, expected.seq());
  CHECK(proto::frame_payload(out[0]) == expected);

  c.receive(id, proto::set_color_ref(ColorReference{{0, 255, 0}, 33}), 120);
  CHECK(c.color().rgb == Rgb{0, 255, 0});
  CHECK(c.color().tolerance == 33);

  c.receive(id, proto::aux(AuxCommand::CameraStop), 130);
  const auto captured = c.frames_captured();
  c.tick(200);
  CHECK(c.frames_captured() == captured);
  c.receive(id, proto::aux(AuxCommand::CameraStart), 210);
  c.tick(300);
  CHECK(c.frames_captured() == captured + 1);
}

TEST_CASE("Centre: recording captures every tick") {
  TempDir dir;
  Centre c = sim_centre();
  c.start_recording(dir.path / "rec.seq");
  for (int t = 0; t < 6; ++t) c.tick(t * 100);
  c.stop_recording();
  const auto seq = load_sequence(dir.path / "rec.seq");
  REQUIRE(seq.size() == 6);
  CHECK(seq[5].seq() == 5);
  CHECK(seq[5].timestamp_ms() == 500);
  CHECK(seq[5] == *c.last_frame());
}

TEST_CASE("Centre::from_config builds the frame source") {
  TempDir dir;
  write_text(dir.path / "s.scene", "camera 32 24\nrover 0 0 0\nobject 3 0 0.5 255 0 0\n");
  CentreConfig cfg = base_config();
  cfg.scene_file = dir.path / "s.scene";
  Centre sim = Centre::from_config(cfg);
  sim.tick(0);
  CHECK(sim.last_frame()->width() == 32);

  save_sequence(dir.path / "r.seq", synth_motion_sequence(triggering_square()));
  cfg.scene_file.reset();
  cfg.sequence_file = dir.path / "r.seq";
  Centre replay = Centre::from_config(cfg);
  for (int t = 0; t < 9; ++t) replay.tick(t);
  CHECK(replay.last_frame()->width() == 64);
  CHECK(replay.last_frame()->seq() == 8);

  cfg.sequence_file = dir.path / "missing.seq";
  CHECK_THROWS_AS(Centre::from_config(cfg), std::ios_base::failure);
}
