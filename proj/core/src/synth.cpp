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

#include "attnguide/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <opencv2/imgproc.hpp>

#include "attnguide/error.hpp"
#include "text_io.hpp"

namespace attnguide {
namespace fs = std::filesystem;

namespace {

constexpr double kGravity = 9.81;
constexpr double kTaperSeconds = 0.25;
constexpr std::uint8_t kBackground = 110;

// mt19937_64 is fully specified by the standard; the distributions are not,
// so the few we need are written out to keep output identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }
  // Standard normal truncated to +-3.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return std::clamp(z, -3.0, 3.0);
  }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Nanos frame_time(std::size_t f, double fps) {
  return static_cast<Nanos>(std::llround(static_cast<double>(f) * kNanosPerSecond / fps));
}

// Nearest frame, ties to the earlier one, clamped to the session.
std::size_t nearest_frame(Nanos t, std::size_t frame_count, double fps) {
  const double approx = static_cast<double>(t) * fps / kNanosPerSecond;
  auto lo = static_cast<std::ptrdiff_t>(std::floor(approx)) - 1;
  lo = std::clamp<std::ptrdiff_t>(lo, 0, static_cast<std::ptrdiff_t>(frame_count) - 1);
  std::size_t best = static_cast<std::size_t>(lo);
  Nanos best_d = std::llabs(t - frame_time(best, fps));
  for (std::size_t f = best + 1; f < frame_count && f <= static_cast<std::size_t>(lo) + 3; ++f) {
    const Nanos d = std::llabs(t - frame_time(f, fps));
    if (d < best_d) {
      best = f;
      best_d = d;
    }
  }
  return best;
}

struct FrameRecipe {
  int object_id = -1;
  Point2 center;
  double clutter_shift = 0.0;
  double hand_progress = -1.0;  // < 0: no hand
};

struct ClutterShape {
  int x, y, w, h;
  std::uint8_t level;
};

class SynthFrameSource final : public FrameSource {
 public:
  SynthFrameSource(std::vector<FrameRecipe> recipes, std::vector<ClutterShape> clutter,
                   double pixel_noise, std::uint64_t seed)
      : recipes_(std::move(recipes)),
        clutter_(std::move(clutter)),
        pixel_noise_(pixel_noise),
        seed_(seed) {}

  std::size_t size() const override { return recipes_.size(); }

  cv::Mat image(std::size_t index) const override {
    const auto& r = recipes_.at(index);
    cv::Mat img(kCanonicalHeight, kCanonicalWidth, CV_8UC1, cv::Scalar(kBackground));
    if (r.object_id >= 0) {
      draw_object(img, r.object_id, r.center);
      if (r.hand_progress >= 0.0) {
        const double p = std::min(1.0, r.hand_progress);
        const cv::Point c(static_cast<int>(std::lround(620 + (r.center.x + 45 - 620) * p)),
                          static_cast<int>(std::lround(400 + (r.center.y + 55 - 400) * p)));
        cv::ellipse(img, c, cv::Size(55, 38), 30.0, 0.0, 360.0, cv::Scalar(70), cv::FILLED);
      }
    } else {
      for (const auto& s : clutter_) {
        const int x = static_cast<int>(std::lround(s.x + r.clutter_shift)) % (kCanonicalWidth + 200) - 100;
        cv::rectangle(img, cv::Rect(x, s.y, s.w, s.h), cv::Scalar(s.level), cv::FILLED);
      }
    }
    if (pixel_noise_ > 0.0) {
      std::uint64_t state = seed_ ^ (0xa0761d6478bd642fULL * (index + 1));
      const int amp = static_cast<int>(std::lround(pixel_noise_));
      for (int y = 0; y < img.rows; ++y) {
        auto* row = img.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.cols; ++x) {
          const int n = static_cast<int>(splitmix(state) % static_cast<std::uint64_t>(2 * amp + 1)) - amp;
          row[x] = static_cast<std::uint8_t>(std::clamp(row[x] + n, 0, 255));
        }
      }
    }
    return img;
  }

 private:
  std::vector<FrameRecipe> recipes_;
  std::vector<ClutterShape> clutter_;
  double pixel_noise_;
  std::uint64_t seed_;
};

std::size_t first_frame_at_or_after(double seconds, double fps) {
  return static_cast<std::size_t>(std::max(0.0, std::ceil(seconds * fps - 1e-9)));
}

}  // namespace

std::string object_label(int object_id) { return "obj" + std::to_string(object_id); }

void draw_object(cv::Mat& canvas, int object_id, Point2 center) {
  Rng rng(0x6f626a656374ULL + static_cast<std::uint64_t>(object_id) * 7919ULL);
  const cv::Point2d c(center.x, center.y);
  auto pt = [&](double dx, double dy) {
    return cv::Point(static_cast<int>(std::lround(c.x + dx)), static_cast<int>(std::lround(c.y + dy)));
  };
  const double bw = rng.uniform(55, 70), bh = rng.uniform(45, 65);
  cv::rectangle(canvas, pt(-bw, -bh), pt(bw, bh), cv::Scalar(200), cv::FILLED);
  cv::rectangle(canvas, pt(-bw, -bh), pt(bw, bh), cv::Scalar(30), 3);

  const int elements = rng.integer(3, 5);
  for (int k = 0; k < elements; ++k) {
    const int kind = rng.integer(0, 4);
    const double ex = rng.uniform(-bw * 0.55, bw * 0.55), ey = rng.uniform(-bh * 0.55, bh * 0.55);
    const double s = rng.uniform(10, 24);
    const cv::Scalar ink(rng.uniform() < 0.5 ? 30 : 250);
    switch (kind) {
      case 0:  // filled rectangle
        cv::rectangle(canvas, pt(ex - s, ey - s * 0.6), pt(ex + s, ey + s * 0.6), ink, cv::FILLED);
        break;
      case 1:  // cross
        cv::rectangle(canvas, pt(ex - s, ey - 3), pt(ex + s, ey + 3), ink, cv::FILLED);
        cv::rectangle(canvas, pt(ex - 3, ey - s), pt(ex + 3, ey + s), ink, cv::FILLED);
        break;
      case 2:  // nested rectangles
        cv::rectangle(canvas, pt(ex - s, ey - s), pt(ex + s, ey + s), ink, 3);
        cv::rectangle(canvas, pt(ex - s / 2, ey - s / 2), pt(ex + s / 2, ey + s / 2), ink, 3);
        break;
      case 3: {  // diagonal bar
        const double a = rng.uniform(0.3, 1.2) * (rng.uniform() < 0.5 ? 1 : -1);
        const double ca = std::cos(a), sa = std::sin(a);
        const cv::Point poly[4] = {pt(ex - s * ca + 4 * sa, ey - s * sa - 4 * ca),
                                   pt(ex + s * ca + 4 * sa, ey + s * sa - 4 * ca),
                                   pt(ex + s * ca - 4 * sa, ey + s * sa + 4 * ca),
                                   pt(ex - s * ca - 4 * sa, ey - s * sa + 4 * ca)};
        cv::fillConvexPoly(canvas, poly, 4, ink);
        break;
      }
      default:  // ring
        cv::circle(canvas, pt(ex, ey), static_cast<int>(s * 0.8), ink, 3);
        break;
    }
  }
}

void ScenarioSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInconsistentSpec, msg); };
  if (!(duration_s > 0) || !(fps > 0) || !(imu_rate_hz > 0)) {
    fail("duration, fps and IMU rate must be positive");
  }
  if (imu_rate_hz < fps) fail("IMU rate must be at least the frame rate");
  if (!(tau_margin > 0) || !(nu_margin > 0) || tau_margin >= tau || nu_margin >= nu) {
    fail("margins must be positive and below the thresholds");
  }
  if (!(gravity_alpha >= 0.0 && gravity_alpha < 1.0)) fail("gravity alpha must lie in [0, 1)");
  if (motion.noise_fraction < 0) fail("noise fraction must be >= 0");
  const double bound = 3.0 * std::sqrt(3.0);  // truncated 3-axis noise magnitude
  const double acc_sd = motion.noise_fraction * tau_margin;
  const double gyro_sd = motion.noise_fraction * nu_margin;
  if (motion.still_accel + 2.0 * bound * acc_sd > tau - tau_margin) {
    fail("in-episode acceleration amplitude reaches tau - margin");
  }
  if (motion.still_gyro + bound * gyro_sd > nu - nu_margin) {
    fail("in-episode angular velocity amplitude reaches nu - margin");
  }
  if (motion.motion_gyro - bound * gyro_sd < nu + nu_margin) {
    fail("inter-episode angular velocity does not exceed nu + margin");
  }
  if (motion.still_accel < 0 || motion.still_gyro < 0 || motion.motion_accel < 0) {
    fail("amplitudes must be non-negative");
  }
  for (std::size_t k = 0; k < episodes.size(); ++k) {
    const auto& e = episodes[k];
    if (!(e.start_s >= 0 && e.end_s > e.start_s && e.end_s <= duration_s)) {
      fail("episode " + std::to_string(k) + " is outside [0, duration]");
    }
    if (k > 0 && e.start_s < episodes[k - 1].end_s) fail("episodes must be ordered and disjoint");
    if (e.object_id < 0) fail("object ids must be >= 0");
    if (first_frame_at_or_after(e.start_s, fps) >= first_frame_at_or_after(e.end_s, fps)) {
      fail("episode " + std::to_string(k) + " covers no frame");
    }
  }
  if (jitter_px < 0 || pixel_noise < 0 || expert_jitter < 0) fail("jitter and noise must be >= 0");
}

GeneratedScenario generate(const ScenarioSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto n_frames = static_cast<std::size_t>(std::floor(spec.duration_s * spec.fps + 1e-9));
  const auto n_samples = static_cast<std::size_t>(std::floor(spec.duration_s * spec.imu_rate_hz + 1e-9));
  if (n_frames == 0) throw Error(ErrorCode::kInconsistentSpec, "scenario has no frames");

  std::vector<FrameStamp> stamps(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) stamps[f] = {f, frame_time(f, spec.fps)};

  // Planted frame ranges and per-frame labels.
  std::vector<Episode> planted;
  std::vector<int> episode_of(n_frames, -1);
  for (std::size_t k = 0; k < spec.episodes.size(); ++k) {
    const auto s = first_frame_at_or_after(spec.episodes[k].start_s, spec.fps);
    const auto e = std::min(n_frames, first_frame_at_or_after(spec.episodes[k].end_s, spec.fps));
    if (s >= e) throw Error(ErrorCode::kInconsistentSpec, "episode covers no frame");
    planted.push_back({s, e - 1});
    for (std::size_t f = s; f < e; ++f) episode_of[f] = static_cast<int>(k);
  }
  std::vector<AttentionState> states(n_frames, AttentionState::kInMotion);
  for (std::size_t f = 0; f < n_frames; ++f) {
    if (episode_of[f] >= 0) states[f] = AttentionState::kAttending;
  }

  // Moving segments: maximal runs of samples whose frame is not attending.
  std::vector<Nanos> sample_t(n_samples);
  std::vector<bool> sample_still(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    sample_t[i] = static_cast<Nanos>(std::llround(static_cast<double>(i) * kNanosPerSecond / spec.imu_rate_hz));
    sample_still[i] = is_attending(states[nearest_frame(sample_t[i], n_frames, spec.fps)]);
  }
  std::vector<double> envelope(n_samples, 0.0);
  const double ramp = kTaperSeconds * spec.imu_rate_hz;
  for (std::size_t i = 0; i < n_samples;) {
    if (sample_still[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n_samples && !sample_still[j + 1]) ++j;
    const bool open_start = i == 0, open_end = j + 1 == n_samples;
    for (std::size_t k = i; k <= j; ++k) {
      const double from_start = open_start ? ramp : static_cast<double>(k - i);
      const double to_end = open_end ? ramp : static_cast<double>(j - k);
      envelope[k] = std::clamp(std::min(from_start, to_end) / ramp, 0.0, 1.0);
    }
    i = j + 1;
  }

  const double acc_sd = spec.motion.noise_fraction * spec.tau_margin;
  const double gyro_sd = spec.motion.noise_fraction * spec.nu_margin;
  const double phase = rng.uniform(0, 2 * std::numbers::pi);
  std::vector<ImuSample> imu(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t = static_cast<double>(sample_t[i]) / kNanosPerSecond;
    ImuSample s;
    s.t = sample_t[i];
    Eigen::Vector3d accel(0.0, 0.0, kGravity);
    Eigen::Vector3d gyro;
    if (sample_still[i]) {
      accel.x() += spec.motion.still_accel;
      gyro = Eigen::Vector3d(std::cos(0.3 * t + phase), std::sin(0.3 * t + phase), 0.0) *
             spec.motion.still_gyro;
    } else {
      const double w = 2.0 * std::numbers::pi * 7.0 * t + phase;
      accel += spec.motion.motion_accel * envelope[i] * Eigen::Vector3d(std::cos(w), std::sin(w), 0.0);
      Eigen::Vector3d axis(std::cos(0.7 * t + phase), std::sin(0.7 * t + phase), 0.5);
      gyro = axis.normalized() * spec.motion.motion_gyro;
    }
    // Noise is always drawn so that changing the labels does not shift the
    // random stream of later samples.
    Eigen::Vector3d na(rng.normal(), rng.normal(), rng.normal());
    Eigen::Vector3d ng(rng.normal(), rng.normal(), rng.normal());
    s.accel = accel + na * acc_sd;
    s.gyro = gyro + ng * gyro_sd;
    imu[i] = s;
  }

  // Construction check on every sample, with the same gravity low-pass the
  // attention model is configured with.
  {
    Eigen::Vector3d gravity = imu.front().accel;
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double rel = (imu[i].accel - gravity).norm();
      gravity = spec.gravity_alpha * gravity + (1.0 - spec.gravity_alpha) * imu[i].accel;
      const double w = imu[i].gyro.norm();
      if (sample_still[i] && (rel > spec.tau - spec.tau_margin || w > spec.nu - spec.nu_margin)) {
        throw Error(ErrorCode::kInconsistentSpec,
                    "still sample " + std::to_string(i) + " reaches the threshold margin");
      }
      if (!sample_still[i] && w < spec.nu + spec.nu_margin) {
        throw Error(ErrorCode::kInconsistentSpec,
                    "moving sample " + std::to_string(i) + " stays below nu + margin");
      }
    }
  }

  // Rendering recipes and ground truth.
  std::vector<Point2> episode_center(spec.episodes.size());
  for (std::size_t k = 0; k < spec.episodes.size(); ++k) {
    const double jx = spec.jitter_px > 0 ? rng.uniform(-spec.jitter_px, spec.jitter_px) : 0.0;
    const double jy = spec.jitter_px > 0 ? rng.uniform(-spec.jitter_px, spec.jitter_px) : 0.0;
    const auto& p = spec.episodes[k].screen_position;
    episode_center[k] = {std::round(p.x + jx), std::round(p.y + jy)};
  }
  std::vector<ClutterShape> clutter;
  for (int k = 0; k < 7; ++k) {
    clutter.push_back({rng.integer(0, kCanonicalWidth + 200), rng.integer(0, kCanonicalHeight - 60),
                       rng.integer(30, 120), rng.integer(20, 80),
                       static_cast<std::uint8_t>(rng.uniform() < 0.5 ? 50 : 190)});
  }
  const double clutter_speed = rng.uniform(6.0, 12.0);  // px per frame

  std::vector<std::optional<Point2>> target(n_frames);
  std::vector<std::string> label(n_frames);
  std::vector<bool> interaction(n_frames, false), onset(n_frames, false);
  std::vector<FrameRecipe> recipes(n_frames);
  for (std::size_t k = 0; k < spec.episodes.size(); ++k) {
    const auto& ep = planted[k];
    const auto lbl = object_label(spec.episodes[k].object_id);
    const std::size_t istart = ep.start + first_frame_at_or_after(spec.interaction_delay_s, spec.fps);
    for (std::size_t f = ep.start; f <= ep.end; ++f) {
      target[f] = episode_center[k];
      label[f] = lbl;
      if (f >= istart) interaction[f] = true;
      recipes[f].object_id = spec.episodes[k].object_id;
      recipes[f].center = episode_center[k];
      if (spec.hands && f >= istart) {
        recipes[f].hand_progress = static_cast<double>(f - istart) / 15.0;
      }
    }
    if (istart <= ep.end) {
      const double onset_s = static_cast<double>(ep.start) / spec.fps - spec.gaze_lead_s;
      onset[static_cast<std::size_t>(std::max(0.0, std::round(onset_s * spec.fps)))] = true;
    }
  }
  for (std::size_t f = 0; f < n_frames; ++f) {
    recipes[f].clutter_shift = clutter_speed * static_cast<double>(f);
  }

  std::vector<FrameRange> expert;
  for (const auto& ep : planted) {
    const auto len = static_cast<double>(ep.length());
    const auto d = static_cast<std::ptrdiff_t>(std::llround(spec.expert_jitter * len));
    const auto s_sign = rng.uniform() < 0.5 ? -1 : 1;
    const auto e_sign = rng.uniform() < 0.5 ? -1 : 1;
    auto s = static_cast<std::ptrdiff_t>(ep.start) + s_sign * d;
    auto e = static_cast<std::ptrdiff_t>(ep.end) + e_sign * d;
    s = std::clamp<std::ptrdiff_t>(s, 0, static_cast<std::ptrdiff_t>(n_frames) - 1);
    e = std::clamp<std::ptrdiff_t>(e, s, static_cast<std::ptrdiff_t>(n_frames) - 1);
    expert.push_back({static_cast<std::size_t>(s), static_cast<std::size_t>(e)});
  }

  SessionMeta meta{spec.user_id, spec.task_id, spec.mode, 0};
  auto source = std::make_shared<SynthFrameSource>(std::move(recipes), std::move(clutter),
                                                   spec.pixel_noise, spec.seed);
  GeneratedScenario out{spec,
                        Session(std::move(stamps), std::move(imu), meta, std::move(source)),
                        make_ground_truth(std::move(target), std::move(label), interaction, onset),
                        std::move(states),
                        std::move(planted),
                        std::move(expert)};
  return out;
}

ScenarioSpec random_scenario(std::uint64_t seed, const RandomScenarioOptions& o) {
  if (o.episodes < 0 || o.min_length_s <= 0 || o.max_length_s < o.min_length_s || o.min_gap_s <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad random scenario options");
  }
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 17);
  ScenarioSpec spec;
  spec.seed = seed;
  spec.duration_s = o.duration_s;
  spec.mode = o.mode;
  spec.user_id = o.user_id;
  spec.task_id = o.task_id;
  spec.motion.noise_fraction = o.noise_fraction;
  spec.jitter_px = o.jitter_px;

  std::vector<double> lengths;
  double total = 0;
  for (int k = 0; k < o.episodes; ++k) {
    lengths.push_back(rng.uniform(o.min_length_s, o.max_length_s));
    total += lengths.back();
  }
  const double slack = o.duration_s - total - (o.episodes + 1) * o.min_gap_s;
  if (slack < 0) throw Error(ErrorCode::kInvalidArgument, "episodes do not fit the duration");
  std::vector<double> weights(static_cast<std::size_t>(o.episodes) + 1);
  double wsum = 0;
  for (auto& w : weights) wsum += (w = rng.uniform(0.05, 1.0));

  std::vector<int> objects(static_cast<std::size_t>(std::max(o.object_count, 1)));
  for (std::size_t i = 0; i < objects.size(); ++i) objects[i] = static_cast<int>(i);
  for (std::size_t i = objects.size(); i > 1; --i) {
    std::swap(objects[i - 1], objects[static_cast<std::size_t>(rng.integer(0, static_cast<int>(i) - 1))]);
  }

  double t = 0;
  for (int k = 0; k < o.episodes; ++k) {
    t += o.min_gap_s + slack * weights[static_cast<std::size_t>(k)] / wsum;
    PlantedEpisode e;
    e.start_s = t;
    e.end_s = t + lengths[static_cast<std::size_t>(k)];
    e.object_id = objects[static_cast<std::size_t>(k) % objects.size()];
    spec.episodes.push_back(e);
    t = e.end_s;
  }
  return spec;
}

ScenarioSpec read_scenario_spec(const fs::path& path) {
  ScenarioSpec spec;
  spec.episodes.clear();
  for (const auto& [key, value] : detail::read_key_values(path)) {
    try {
      auto num = [&] { return detail::parse_double(value); };
      if (key == "user_id") spec.user_id = value;
      else if (key == "task_id") spec.task_id = value;
      else if (key == "mode") spec.mode = parse_session_mode(value);
      else if (key == "duration_s") spec.duration_s = num();
      else if (key == "fps") spec.fps = num();
      else if (key == "imu_rate_hz") spec.imu_rate_hz = num();
      else if (key == "seed") spec.seed = static_cast<std::uint64_t>(detail::parse_int(value));
      else if (key == "tau") spec.tau = num();
      else if (key == "nu") spec.nu = num();
      else if (key == "tau_margin") spec.tau_margin = num();
      else if (key == "nu_margin") spec.nu_margin = num();
      else if (key == "gravity_alpha") spec.gravity_alpha = num();
      else if (key == "motion_accel") spec.motion.motion_accel = num();
      else if (key == "motion_gyro") spec.motion.motion_gyro = num();
      else if (key == "still_accel") spec.motion.still_accel = num();
      else if (key == "still_gyro") spec.motion.still_gyro = num();
      else if (key == "noise_fraction") spec.motion.noise_fraction = num();
      else if (key == "jitter_px") spec.jitter_px = num();
      else if (key == "pixel_noise") spec.pixel_noise = num();
      else if (key == "hands") spec.hands = value == "true" || value == "1";
      else if (key == "interaction_delay_s") spec.interaction_delay_s = num();
      else if (key == "gaze_lead_s") spec.gaze_lead_s = num();
      else if (key == "expert_jitter") spec.expert_jitter = num();
      else if (key == "episode") {
        std::istringstream in(value);
        std::string a, b, c, d, e, extra;
        if (!(in >> a >> b >> c >> d >> e) || (in >> extra)) {
          throw std::invalid_argument("episode needs 'start_s end_s object_id x y'");
        }
        spec.episodes.push_back({detail::parse_double(a), detail::parse_double(b),
                                 static_cast<int>(detail::parse_int(c)),
                                 {detail::parse_double(d), detail::parse_double(e)}});
      } else {
        throw std::invalid_argument("unknown key");
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception& ex) {
      throw Error(ErrorCode::kCorruptFile, path.string() + ": " + key + ": " + ex.what());
    }
  }
  return spec;
}

void write_scenario_spec(const fs::path& path, const ScenarioSpec& s) {
  using detail::format_double;
  std::ostringstream out;
  out << "user_id = " << s.user_id << "\ntask_id = " << s.task_id << "\nmode = " << to_string(s.mode)
      << "\nduration_s = " << format_double(s.duration_s) << "\nfps = " << format_double(s.fps)
      << "\nimu_rate_hz = " << format_double(s.imu_rate_hz) << "\nseed = " << s.seed
      << "\ntau = " << format_double(s.tau) << "\nnu = " << format_double(s.nu)
      << "\ntau_margin = " << format_double(s.tau_margin)
      << "\nnu_margin = " << format_double(s.nu_margin)
      << "\ngravity_alpha = " << format_double(s.gravity_alpha)
      << "\nmotion_accel = " << format_double(s.motion.motion_accel)
      << "\nmotion_gyro = " << format_double(s.motion.motion_gyro)
      << "\nstill_accel = " << format_double(s.motion.still_accel)
      << "\nstill_gyro = " << format_double(s.motion.still_gyro)
      << "\nnoise_fraction = " << format_double(s.motion.noise_fraction)
      << "\njitter_px = " << format_double(s.jitter_px)
      << "\npixel_noise = " << format_double(s.pixel_noise)
      << "\nhands = " << (s.hands ? "true" : "false")
      << "\ninteraction_delay_s = " << format_double(s.interaction_delay_s)
      << "\ngaze_lead_s = " << format_double(s.gaze_lead_s)
      << "\nexpert_jitter = " << format_double(s.expert_jitter) << '\n';
  for (const auto& e : s.episodes) {
    out << "episode = " << format_double(e.start_s) << ' ' << format_double(e.end_s) << ' '
        << e.object_id << ' ' << format_double(e.screen_position.x) << ' '
        << format_double(e.screen_position.y) << '\n';
  }
  detail::write_file_atomic(path, out.str());
}

void write_scenario(const fs::path& dir, const GeneratedScenario& sc) {
  fs::create_directories(dir);
  write_session(dir, sc.session);
  write_ground_truth_csv(dir / "truth.csv", sc.truth);
  write_cuts_csv(dir / "expert_cuts.csv", sc.expert_cuts);
  write_scenario_spec(dir / "scenario.txt", sc.spec);
  std::ostringstream out;
  out << "frame_index,state,episode_id\n";
  std::size_t k = 0;
  for (std::size_t f = 0; f < sc.expected_states.size(); ++f) {
    while (k < sc.expected_episodes.size() && sc.expected_episodes[k].end < f) ++k;
    const bool inside = k < sc.expected_episodes.size() && sc.expected_episodes[k].start <= f;
    out << f << ',' << (is_attending(sc.expected_states[f]) ? "attending" : "in_motion") << ','
        << (inside ? static_cast<long long>(k) : -1LL) << '\n';
  }
  detail::write_file_atomic(dir / "expected_timeline.csv", out.str());
}

}  // namespace attnguide
