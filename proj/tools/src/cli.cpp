// Copyright 2026 The attnguide Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "attnguide/attention.hpp"
#include "attnguide/detector.hpp"
#include "attnguide/error.hpp"
#include "attnguide/eval.hpp"
#include "attnguide/guidestore.hpp"
#include "attnguide/ingest.hpp"
#include "attnguide/runtime.hpp"
#include "attnguide/snippets.hpp"
#include "attnguide/synth.hpp"

namespace attnguide::cli {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + p.string());
}

}  // namespace

std::uint64_t fnv1a_path(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::kMissingFile, path.string());
  if (!fs::is_directory(path)) return fnv1a(read_all(path));
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(path)) {
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), path));
  }
  std::sort(files.begin(), files.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& f : files) {
    h = fnv1a(f.generic_string(), h);
    h = fnv1a(std::string(1, '\0'), h);
    h = fnv1a(read_all(path / f), h);
  }
  return h;
}

namespace {

// Everything a run read, wrote and was configured with. No clocks, so two
// identical runs produce identical manifests.
class RunManifest {
 public:
  explicit RunManifest(std::string command) { doc_["command"] = std::move(command); }

  json& config() { return doc_["config"]; }
  void input(const std::string& name, const fs::path& p) {
    doc_["inputs"][name] = {{"path", p.string()}, {"fnv1a64", hex64(fnv1a_path(p))}};
  }
  void output(const std::string& name, const fs::path& p) { doc_["outputs"][name] = p.string(); }

  void echo(std::ostream& err) const {
    for (const auto& [k, v] : doc_["config"].items()) err << "config: " << k << " = " << v.dump() << '\n';
  }
  void write(const fs::path& p) {
    output("manifest", p);
    write_text(p, doc_.dump(2) + "\n");
  }

 private:
  json doc_ = json::object();
};

struct ParamFlags {
  RuntimeParams p;

  void add_attention(CLI::App* app) {
    app->add_option("--tau", p.attention.tau, "relative acceleration threshold, m/s^2")->capture_default_str();
    app->add_option("--nu", p.attention.nu, "relative angular velocity threshold, rad/s")->capture_default_str();
    app->add_option("--median-window", p.attention.median_window, "median filter window, odd frames")->capture_default_str();
    app->add_option("--min-episode-frames", p.attention.min_episode_frames)->capture_default_str();
    app->add_option("--gravity-alpha", p.attention.gravity_alpha, "gravity low-pass coefficient")->capture_default_str();
  }
  void add_detector(CLI::App* app) {
    app->add_option("--detect-threshold", p.detector.threshold)->capture_default_str();
    app->add_option("--scales", p.detector.scales)->delimiter(',')->capture_default_str();
    app->add_option("--rotations", p.detector.rotations_deg, "degrees")->delimiter(',')->capture_default_str();
    app->add_option("--stride", p.detector.stride, "coarse translation step, px")->capture_default_str();
    app->add_option("--max-shift", p.detector.max_shift, "translation range, px")->capture_default_str();
    app->add_option("--refine", p.detector.refine, "unit-step search around the coarse optimum")->capture_default_str();
    app->add_option("--lambda", p.detector.lambda, "distance fall-off, px")->capture_default_str();
    app->add_option("--edge-threshold", p.detector.edges.gradient_threshold)->capture_default_str();
  }
  void add_runtime(CLI::App* app) {
    app->add_option("--cooldown", p.cooldown_frames, "frames between guide playbacks")->capture_default_str();
    app->add_option("--detect-every-n", p.detect_every_n)->capture_default_str();
    app->add_option("--pre-roll", p.snippets.pre_roll_frames)->capture_default_str();
    app->add_option("--post-roll", p.snippets.post_roll_frames)->capture_default_str();
  }

  void echo_attention(json& c) const {
    c["tau"] = p.attention.tau;
    c["nu"] = p.attention.nu;
    c["median_window"] = p.attention.median_window;
    c["min_episode_frames"] = p.attention.min_episode_frames;
    c["gravity_alpha"] = p.attention.gravity_alpha;
  }
  void echo_detector(json& c) const {
    c["detect_threshold"] = p.detector.threshold;
    c["scales"] = p.detector.scales;
    c["rotations_deg"] = p.detector.rotations_deg;
    c["stride"] = p.detector.stride;
    c["max_shift"] = p.detector.max_shift;
    c["refine"] = p.detector.refine;
    c["lambda"] = p.detector.lambda;
    c["edge_threshold"] = p.detector.edges.gradient_threshold;
    c["min_edgelets"] = p.detector.min_edgelets;
    c["max_edgelets"] = p.detector.max_edgelets;
  }
  void echo_runtime(json& c) const {
    c["cooldown"] = p.cooldown_frames;
    c["detect_every_n"] = p.detect_every_n;
    c["pre_roll"] = p.snippets.pre_roll_frames;
    c["post_roll"] = p.snippets.post_roll_frames;
  }
};

struct SessionFlags {
  std::string frames;
  std::string imu;
  std::string meta;
  std::string user;
  std::string task;
  std::optional<double> fps;
  bool gyro_deg = false;

  void add(CLI::App* app) {
    app->add_option("--frames", frames, "frame directory (frame_%06d.png + frame_times.csv) or video")->required();
    app->add_option("--imu", imu, "IMU CSV")->required();
    app->add_option("--meta", meta, "session metadata; defaults to meta.txt next to the IMU file");
    app->add_option("--user", user, "override user_id");
    app->add_option("--task", task, "override task_id");
    app->add_option("--fps", fps, "frame rate of a video input");
    app->add_flag("--gyro-deg", gyro_deg, "IMU gyro columns are in deg/s");
  }

  Session load(SessionMode mode, RunManifest& m) const {
    SessionMeta meta_v{"u00", "t00", mode, 0};
    fs::path meta_path = meta;
    if (meta_path.empty()) {
      const auto sibling = fs::path(imu).parent_path() / "meta.txt";
      if (fs::exists(sibling)) meta_path = sibling;
    }
    if (!meta_path.empty()) {
      meta_v = read_session_meta(meta_path);
      m.input("meta", meta_path);
    }
    meta_v.mode = mode;
    if (!user.empty()) meta_v.user_id = user;
    if (!task.empty()) meta_v.task_id = task;
    auto& c = m.config();
    c["frames"] = frames;
    c["imu"] = imu;
    c["user_id"] = meta_v.user_id;
    c["task_id"] = meta_v.task_id;
    c["mode"] = to_string(mode);
    c["gyro_unit"] = gyro_deg ? "deg/s" : "rad/s";
    c["video_fps"] = fps ? json(*fps) : json(nullptr);
    m.input("frames", frames);
    m.input("imu", imu);
    LoadOptions o;
    o.gyro_unit = gyro_deg ? GyroUnit::kDegreesPerSecond : GyroUnit::kRadiansPerSecond;
    o.video_fps = fps;
    return load_session(frames, imu, meta_v, o);
  }
};

fs::path default_manifest(const std::string& given, const fs::path& fallback) {
  return given.empty() ? fallback : fs::path(given);
}

fs::path sidecar(const fs::path& p, const std::string& suffix) {
  return p.string() + suffix;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// AOI box, plus the matched model's edgelets when a guide was chosen.
void emit_annotated(const fs::path& dir, const DetectionAttempt& a, const GuideStore& store) {
  cv::Mat img;
  if (a.frame.image.channels() == 1) {
    cv::cvtColor(a.frame.image, img, cv::COLOR_GRAY2BGR);
  } else {
    img = a.frame.image.clone();
  }
  const auto& aoi = a.index.aoi();
  const cv::Scalar color = a.choice ? cv::Scalar(0, 200, 0) : cv::Scalar(0, 0, 220);
  if (a.choice) {
    const Guide* g = store.find_by_model(a.choice->model_id);
    const auto it = std::find_if(a.detections.begin(), a.detections.end(),
                                 [&](const Detection& d) { return d.model_id == a.choice->model_id; });
    if (g && it != a.detections.end()) {
      for (const auto& e : transform_edgelets(g->model, it->pose)) {
        const int x = e.x + aoi.x0, y = e.y + aoi.y0;
        if (x >= 0 && y >= 0 && x < img.cols && y < img.rows) img.at<cv::Vec3b>(y, x) = {0, 255, 255};
      }
    }
    cv::putText(img, a.choice->guide_id, {aoi.x0, std::max(12, aoi.y0 - 6)},
                cv::FONT_HERSHEY_SIMPLEX, 0.45, color, 1);
  }
  cv::rectangle(img, aoi.rect(), color, 2);
  char name[32];
  std::snprintf(name, sizeof(name), "frame_%06zu.png", a.frame.index);
  if (!cv::imwrite((dir / name).string(), img)) {
    throw Error(ErrorCode::kIo, "cannot write " + (dir / name).string());
  }
}

std::string latency_json(const LatencyReport& r) {
  json j = {{"frames", r.frames},   {"attempts", r.attempts}, {"models", r.models},
            {"p50_ms", r.p50_ms},   {"p99_ms", r.p99_ms},     {"max_ms", r.max_ms},
            {"mean_ms", r.mean_ms}, {"budget_ms", r.budget_ms}, {"within_budget", r.within_budget}};
  return j.dump(2) + "\n";
}

AttentionTimeline timeline_from(const std::string& timeline_csv, const SessionFlags& s,
                                const ParamFlags& pf, RunManifest& m) {
  if (!timeline_csv.empty()) {
    m.input("timeline", timeline_csv);
    return read_timeline_csv(timeline_csv);
  }
  if (s.frames.empty() || s.imu.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "give --timeline or both --frames and --imu");
  }
  pf.echo_attention(m.config());
  const auto session = s.load(SessionMode::kTraining, m);
  return compute_timeline(session, pf.p.attention);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"attnguide: attention-triggered video guides from egocentric sessions", "attnguide"};
  app.set_config("--config", "", "INI/TOML file with option defaults; flags take precedence");
  app.require_subcommand(1);
  std::function<void()> action;

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic session with ground truth");
  std::string synth_spec, synth_out, synth_manifest, synth_mode = "training", synth_user = "u00",
                                                     synth_task = "t00";
  std::uint64_t synth_seed = 1;
  RandomScenarioOptions ropt;
  bool synth_no_hands = false;
  double synth_pixel_noise = 2.0;
  synth->add_option("--spec", synth_spec, "scenario spec file; otherwise a random layout is drawn");
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--seed", synth_seed)->capture_default_str();
  synth->add_option("--episodes", ropt.episodes)->capture_default_str();
  synth->add_option("--duration", ropt.duration_s, "seconds")->capture_default_str();
  synth->add_option("--min-length", ropt.min_length_s, "shortest episode, s")->capture_default_str();
  synth->add_option("--max-length", ropt.max_length_s, "longest episode, s")->capture_default_str();
  synth->add_option("--objects", ropt.object_count, "size of the object pool")->capture_default_str();
  synth->add_option("--noise-fraction", ropt.noise_fraction, "IMU noise sd as a fraction of each margin")->capture_default_str();
  synth->add_option("--jitter", ropt.jitter_px, "object placement jitter, px")->capture_default_str();
  synth->add_option("--pixel-noise", synth_pixel_noise)->capture_default_str();
  synth->add_flag("--no-hands", synth_no_hands, "do not render the occluding hand");
  synth->add_option("--mode", synth_mode, "training or assistive")->capture_default_str();
  synth->add_option("--user", synth_user)->capture_default_str();
  synth->add_option("--task", synth_task)->capture_default_str();
  synth->add_option("--manifest", synth_manifest, "run manifest path");
  synth->callback([&] {
    action = [&] {
      RunManifest m("synth");
      ScenarioSpec spec;
      if (!synth_spec.empty()) {
        m.input("spec", synth_spec);
        spec = read_scenario_spec(synth_spec);
      } else {
        ropt.mode = parse_session_mode(synth_mode);
        ropt.user_id = synth_user;
        ropt.task_id = synth_task;
        spec = random_scenario(synth_seed, ropt);
        spec.pixel_noise = synth_pixel_noise;
        spec.hands = !synth_no_hands;
      }
      auto& c = m.config();
      c["seed"] = spec.seed;
      c["user_id"] = spec.user_id;
      c["task_id"] = spec.task_id;
      c["mode"] = to_string(spec.mode);
      c["duration_s"] = spec.duration_s;
      c["fps"] = spec.fps;
      c["imu_rate_hz"] = spec.imu_rate_hz;
      c["episodes"] = spec.episodes.size();
      c["noise_fraction"] = spec.motion.noise_fraction;
      c["jitter_px"] = spec.jitter_px;
      c["pixel_noise"] = spec.pixel_noise;
      c["hands"] = spec.hands;
      m.echo(err);
      const auto sc = generate(spec);
      write_scenario(synth_out, sc);
      const fs::path o = synth_out;
      m.output("frames", o / "frames");
      m.output("imu", o / "imu.csv");
      m.output("meta", o / "meta.txt");
      m.output("truth", o / "truth.csv");
      m.output("expected_timeline", o / "expected_timeline.csv");
      m.output("expert_cuts", o / "expert_cuts.csv");
      m.output("spec", o / "scenario.txt");
      m.write(default_manifest(synth_manifest, o / "run_manifest.json"));
      out << "wrote " << sc.session.frame_count() << " frames, " << sc.session.imu().size()
          << " IMU samples and " << sc.expected_episodes.size() << " planted episodes to "
          << synth_out << '\n';
    };
  });

  // train
  auto* train = app.add_subcommand("train", "harvest guides from a training session into a store");
  SessionFlags train_s;
  ParamFlags train_p;
  std::string train_store, train_timeline, train_snippets, train_events, train_manifest, train_media;
  train_s.add(train);
  train_p.add_attention(train);
  train_p.add_detector(train);
  train_p.add_runtime(train);
  train->add_option("--store", train_store, "guide store directory, created or extended")->required();
  train->add_option("--media-source", train_media, "prefix of media references; defaults to --frames");
  train->add_option("--timeline", train_timeline, "also write the attention timeline CSV");
  train->add_option("--snippets", train_snippets, "also write the snippet manifest CSV");
  train->add_option("--events", train_events, "also write the event log CSV");
  train->add_option("--manifest", train_manifest, "run manifest path");
  train->callback([&] {
    action = [&] {
      RunManifest m("train");
      train_p.p.media_source = train_media.empty() ? train_s.frames : train_media;
      const auto session = train_s.load(SessionMode::kTraining, m);
      auto& c = m.config();
      train_p.echo_attention(c);
      train_p.echo_detector(c);
      train_p.echo_runtime(c);
      c["media_source"] = train_p.p.media_source;
      c["store"] = train_store;
      if (fs::exists(fs::path(train_store) / "guides.csv")) m.input("store", train_store);
      m.echo(err);
      auto result = run_training(session, train_p.p, load_store_or_empty(train_store));
      save_store(result.store, train_store);
      m.output("store", train_store);
      if (!train_timeline.empty()) {
        write_timeline_csv(train_timeline, result.timeline);
        m.output("timeline", train_timeline);
      }
      if (!train_snippets.empty()) {
        write_snippet_manifest(train_snippets, result.snippets);
        m.output("snippets", train_snippets);
      }
      if (!train_events.empty()) {
        write_event_log(train_events, result.events);
        m.output("events", train_events);
      }
      m.write(default_manifest(train_manifest, fs::path(train_store) / "train_manifest.json"));
      std::size_t trained = 0, skipped = 0;
      for (const auto& e : result.events) {
        trained += e.kind == EventKind::kGuideTrained;
        skipped += e.kind == EventKind::kTrainingSkipped;
      }
      out << result.timeline.episodes.size() << " attention episodes, " << trained
          << " guides trained, " << skipped << " skipped; store now holds " << result.store.size()
          << " guides\n";
    };
  });

  // assist
  auto* assist = app.add_subcommand("assist", "replay an assistive session against a store");
  SessionFlags assist_s;
  ParamFlags assist_p;
  std::string assist_store, assist_events, assist_emit, assist_latency, assist_timeline, assist_manifest;
  bool assist_follow = false;
  assist_s.add(assist);
  assist_p.add_attention(assist);
  assist_p.add_detector(assist);
  assist_p.add_runtime(assist);
  assist->add_option("--store", assist_store, "guide store directory")->required();
  assist->add_option("--events", assist_events, "event log CSV")->required();
  assist->add_option("--emit-frames", assist_emit, "directory for annotated detection frames");
  assist->add_option("--latency", assist_latency, "per-frame latency report JSON (timing, not deterministic)");
  assist->add_option("--timeline", assist_timeline, "also write the attention timeline CSV");
  assist->add_flag("--follow", assist_follow, "stream from stdin (reserved)");
  assist->add_option("--manifest", assist_manifest, "run manifest path");
  assist->callback([&] {
    action = [&] {
      if (assist_follow) throw Error(ErrorCode::kInvalidArgument, "--follow is reserved and not implemented");
      RunManifest m("assist");
      const auto session = assist_s.load(SessionMode::kAssistive, m);
      auto& c = m.config();
      assist_p.echo_attention(c);
      assist_p.echo_detector(c);
      assist_p.echo_runtime(c);
      c["store"] = assist_store;
      c["emit_frames"] = assist_emit;
      m.input("store", assist_store);
      m.echo(err);
      const auto store = load_store(assist_store);
      AttemptObserver observer;
      if (!assist_emit.empty()) {
        fs::create_directories(assist_emit);
        observer = [&](const DetectionAttempt& a) { emit_annotated(assist_emit, a, store); };
        m.output("emit_frames", assist_emit);
      }
      const auto result = run_assistive(session, assist_p.p, store, observer);
      write_event_log(assist_events, result.events);
      m.output("events", assist_events);
      if (!assist_timeline.empty()) {
        write_timeline_csv(assist_timeline, result.timeline);
        m.output("timeline", assist_timeline);
      }
      if (!assist_latency.empty()) {
        const auto r = per_frame_budget_check(session, assist_p.p, store);
        write_text(assist_latency, latency_json(r));
        m.output("latency", assist_latency);
        err << "latency: p50 " << r.p50_ms << " ms, p99 " << r.p99_ms << " ms over " << r.attempts
            << " attempts with " << r.models << " models (budget " << r.budget_ms << " ms)\n";
      }
      m.write(default_manifest(assist_manifest, sidecar(assist_events, ".manifest.json")));
      std::size_t played = 0;
      for (const auto& e : result.events) played += e.kind == EventKind::kGuidePlayed;
      out << result.attempts << " detection attempts, " << played << " guides played\n";
    };
  });

  // eval
  auto* eval = app.add_subcommand("eval", "evaluation metrics");
  eval->require_subcommand(1);

  auto* disc = eval->add_subcommand("discovery", "object discovery precision and recall");
  SessionFlags disc_s;
  ParamFlags disc_p;
  DiscoveryParams dparams;
  std::string disc_truth, disc_timeline, disc_objects, disc_user, disc_out, disc_summary, disc_manifest;
  disc->add_option("--truth", disc_truth, "ground truth CSV")->required();
  disc->add_option("--timeline", disc_timeline, "attention timeline CSV");
  disc->add_option("--frames", disc_s.frames, "compute the timeline from a session instead");
  disc->add_option("--imu", disc_s.imu);
  disc->add_option("--meta", disc_s.meta);
  disc->add_option("--fps", disc_s.fps, "frame rate of a video input");
  disc->add_flag("--gyro-deg", disc_s.gyro_deg);
  disc_p.add_attention(disc);
  disc->add_option("--objects", disc_objects, "comma-separated expected object labels");
  disc->add_option("--iou", dparams.iou_threshold)->capture_default_str();
  disc->add_option("--persistence", dparams.persistence, "frames")->capture_default_str();
  disc->add_option("--user", disc_user, "user id recorded in the report");
  disc->add_option("--out", disc_out, "metrics JSON")->required();
  disc->add_option("--summary", disc_summary, "also write the text summary here");
  disc->add_option("--manifest", disc_manifest, "run manifest path");
  disc->callback([&] {
    action = [&] {
      RunManifest m("eval discovery");
      auto& c = m.config();
      c["iou_threshold"] = dparams.iou_threshold;
      c["persistence"] = dparams.persistence;
      c["aoi_size"] = dparams.aoi_size;
      c["user_id"] = disc_user;
      c["objects"] = split_list(disc_objects);
      m.input("truth", disc_truth);
      const auto truth = read_ground_truth_csv(disc_truth);
      if (!disc_objects.empty()) {
        const auto want = split_list(disc_objects);
        const auto have = truth.objects();
        check_labels(want, have, disc_truth);
      }
      const auto tl = timeline_from(disc_timeline, disc_s, disc_p, m);
      m.echo(err);
      const auto est = estimates_from_timeline(tl, kSpatialAttentionPoint, dparams.aoi_size);
      const auto r = object_discovery(est, truth, dparams);
      write_text(disc_out, discovery_json(r, disc_user));
      m.output("metrics", disc_out);
      const auto summary = discovery_summary(r);
      if (!disc_summary.empty()) {
        write_text(disc_summary, summary);
        m.output("summary", disc_summary);
      }
      m.write(default_manifest(disc_manifest, sidecar(disc_out, ".manifest.json")));
      out << summary;
    };
  });

  auto* lead = eval->add_subcommand("leadtime", "lead time of attention episodes before interactions");
  SessionFlags lead_s;
  ParamFlags lead_p;
  std::string lead_truth, lead_timeline, lead_out, lead_summary, lead_manifest;
  double lead_fps = 30.0, lead_bin = 0.2;
  lead->add_option("--truth", lead_truth, "ground truth CSV")->required();
  lead->add_option("--timeline", lead_timeline, "attention timeline CSV");
  lead->add_option("--frames", lead_s.frames, "compute the timeline from a session instead");
  lead->add_option("--imu", lead_s.imu);
  lead->add_option("--meta", lead_s.meta);
  lead->add_flag("--gyro-deg", lead_s.gyro_deg);
  lead_p.add_attention(lead);
  lead->add_option("--fps", lead_fps, "frame rate used to convert frames to seconds")->capture_default_str();
  lead->add_option("--bin", lead_bin, "histogram bin width, s")->capture_default_str();
  lead->add_option("--out", lead_out, "metrics JSON")->required();
  lead->add_option("--summary", lead_summary, "also write the text summary here");
  lead->add_option("--manifest", lead_manifest, "run manifest path");
  lead->callback([&] {
    action = [&] {
      RunManifest m("eval leadtime");
      auto& c = m.config();
      c["fps"] = lead_fps;
      c["bin_s"] = lead_bin;
      m.input("truth", lead_truth);
      const auto truth = read_ground_truth_csv(lead_truth);
      const auto tl = timeline_from(lead_timeline, lead_s, lead_p, m);
      m.echo(err);
      const auto r = lead_time_analysis(tl, truth, lead_fps, lead_bin);
      write_text(lead_out, lead_time_json(r));
      m.output("metrics", lead_out);
      const auto summary = lead_time_summary(r);
      if (!lead_summary.empty()) {
        write_text(lead_summary, summary);
        m.output("summary", lead_summary);
      }
      m.write(default_manifest(lead_manifest, sidecar(lead_out, ".manifest.json")));
      out << summary;
    };
  });

  auto* ovl = eval->add_subcommand("overlap", "overlap of automatic and expert snippet cuts");
  std::string ovl_auto, ovl_expert, ovl_mode = "iou", ovl_task = "task", ovl_out, ovl_summary, ovl_manifest;
  double ovl_fps = 30.0;
  ovl->add_option("--auto", ovl_auto, "snippet manifest or cuts CSV")->required();
  ovl->add_option("--expert", ovl_expert, "expert cuts CSV (start,end)")->required();
  ovl->add_option("--mode", ovl_mode, "iou or expert")->capture_default_str();
  ovl->add_option("--fps", ovl_fps)->capture_default_str();
  ovl->add_option("--task", ovl_task, "task name shown in the table")->capture_default_str();
  ovl->add_option("--out", ovl_out, "metrics JSON")->required();
  ovl->add_option("--summary", ovl_summary, "also write the table here");
  ovl->add_option("--manifest", ovl_manifest, "run manifest path");
  ovl->callback([&] {
    action = [&] {
      RunManifest m("eval overlap");
      auto& c = m.config();
      const auto mode = parse_overlap_mode(ovl_mode);
      c["mode"] = to_string(mode);
      c["fps"] = ovl_fps;
      c["task"] = ovl_task;
      m.input("auto", ovl_auto);
      m.input("expert", ovl_expert);
      m.echo(err);
      std::vector<FrameRange> automatic;
      const auto head = read_all(ovl_auto).substr(0, 11);
      if (head == "snippet_id,") {
        for (const auto& s : read_snippet_manifest(ovl_auto)) automatic.push_back(s.media);
      } else {
        automatic = read_cuts_csv(ovl_auto);
      }
      const auto r = snippet_overlap(automatic, read_cuts_csv(ovl_expert), ovl_fps, mode);
      write_text(ovl_out, overlap_json(r));
      m.output("metrics", ovl_out);
      const auto table = overlap_table(ovl_task, r);
      if (!ovl_summary.empty()) {
        write_text(ovl_summary, table);
        m.output("summary", ovl_summary);
      }
      m.write(default_manifest(ovl_manifest, sidecar(ovl_out, ".manifest.json")));
      out << table;
    };
  });

  auto* multi = eval->add_subcommand("multiuser", "object-by-user discovery matrix");
  std::vector<std::string> multi_inputs;
  std::string multi_objects, multi_out, multi_summary, multi_manifest;
  multi->add_option("--discovery", multi_inputs, "discovery JSON per user")->required();
  multi->add_option("--objects", multi_objects, "comma-separated common object labels; defaults to the first user's objects");
  multi->add_option("--out", multi_out, "metrics JSON")->required();
  multi->add_option("--summary", multi_summary, "also write the matrix here");
  multi->add_option("--manifest", multi_manifest, "run manifest path");
  multi->callback([&] {
    action = [&] {
      RunManifest m("eval multiuser");
      std::vector<UserDiscovery> users;
      for (std::size_t i = 0; i < multi_inputs.size(); ++i) {
        m.input("discovery_" + std::to_string(i), multi_inputs[i]);
        users.push_back(parse_discovery_json(read_all(multi_inputs[i]), multi_inputs[i]));
      }
      auto objects = split_list(multi_objects);
      if (objects.empty()) objects = users.front().objects;
      m.config()["objects"] = objects;
      m.echo(err);
      const auto r = multi_user_matrix(users, objects);
      write_text(multi_out, multi_user_json(r));
      m.output("metrics", multi_out);
      const auto summary = multi_user_summary(r);
      if (!multi_summary.empty()) {
        write_text(multi_summary, summary);
        m.output("summary", multi_summary);
      }
      m.write(default_manifest(multi_manifest, sidecar(multi_out, ".manifest.json")));
      out << summary;
    };
  });

  // inspect
  auto* inspect = app.add_subcommand("inspect", "look inside sessions and stores");
  inspect->require_subcommand(1);

  auto* itl = inspect->add_subcommand("timeline", "compute and export a session's attention timeline");
  SessionFlags itl_s;
  ParamFlags itl_p;
  std::string itl_out, itl_manifest;
  itl_s.add(itl);
  itl_p.add_attention(itl);
  itl->add_option("--out", itl_out, "timeline CSV")->required();
  itl->add_option("--manifest", itl_manifest, "run manifest path");
  itl->callback([&] {
    action = [&] {
      RunManifest m("inspect timeline");
      const auto session = itl_s.load(SessionMode::kTraining, m);
      itl_p.echo_attention(m.config());
      m.echo(err);
      const auto tl = compute_timeline(session, itl_p.p.attention);
      write_timeline_csv(itl_out, tl);
      m.output("timeline", itl_out);
      m.write(default_manifest(itl_manifest, sidecar(itl_out, ".manifest.json")));
      std::size_t attending = 0;
      for (auto s : tl.filtered) attending += is_attending(s);
      out << tl.size() << " frames, " << attending << " attending after filtering, "
          << tl.episodes.size() << " episodes\n";
      for (std::size_t k = 0; k < tl.episodes.size(); ++k) {
        out << "  episode " << k << ": frames " << tl.episodes[k].start << "-" << tl.episodes[k].end
            << '\n';
      }
    };
  });

  auto* ist = inspect->add_subcommand("store", "list the guides in a store");
  std::string ist_store, ist_manifest;
  ist->add_option("--store", ist_store, "guide store directory")->required();
  ist->add_option("--manifest", ist_manifest, "run manifest path");
  ist->callback([&] {
    action = [&] {
      RunManifest m("inspect store");
      m.config()["store"] = ist_store;
      m.input("store", ist_store);
      m.echo(err);
      const auto store = load_store(ist_store);
      out << store.size() << " guides\n";
      out << "guide_id,user_id,task_id,model_id,edgelets,episode,media_ref\n";
      for (const auto& g : store.guides()) {
        out << g.guide_id << ',' << g.provenance.user_id << ',' << g.provenance.task_id << ','
            << g.model.model_id << ',' << g.model.edgelets.size() << ',' << g.snippet.episode.start
            << '-' << g.snippet.episode.end << ',' << g.media_ref << '\n';
      }
      fs::path base = fs::path(ist_store).lexically_normal();
      if (!base.has_filename()) base = base.parent_path();
      m.write(default_manifest(ist_manifest, sidecar(base, ".inspect.manifest.json")));
    };
  });

  // CLI11 wants argv order reversed when given a vector.
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* sub = &app;
    while (!sub->get_subcommands().empty()) sub = sub->get_subcommands().front();
    out << sub->help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::Success&) {
    return kOk;
  } catch (const CLI::ParseError& e) {
    const CLI::App* sub = &app;
    while (!sub->get_subcommands().empty()) sub = sub->get_subcommands().front();
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kUsage;
  }
  if (!action) {
    err << app.help();
    return kUsage;
  }
  try {
    action();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kInvalidArgument ? kUsage : kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

}  // namespace attnguide::cli
