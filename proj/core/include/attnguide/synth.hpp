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

#pragma once

// Synthetic sessions with known ground truth.
//
// IMU traces are built so that the attention label of every frame is known by
// construction: inside planted episodes the head is still (magnitudes below
// the thresholds minus a margin), outside them it rotates faster than the
// angular threshold plus a margin. Frames render a per-object geometric
// pattern at its screen position during episodes and drifting clutter
// otherwise. Everything is a pure function of the spec and its seed.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "attnguide/attention.hpp"
#include "attnguide/eval.hpp"
#include "attnguide/ingest.hpp"
#include "attnguide/snippets.hpp"

namespace attnguide {

struct PlantedEpisode {
  double start_s = 0.0;  // [start_s, end_s)
  double end_s = 0.0;
  int object_id = 0;
  Point2 screen_position = kSpatialAttentionPoint;

  friend bool operator==(const PlantedEpisode&, const PlantedEpisode&) = default;
};

struct MotionProfile {
  double motion_accel = 4.5;  // amplitude of circular head acceleration, m/s^2
  double motion_gyro = 1.2;   // angular speed while moving, rad/s
  double still_accel = 0.3;   // constant offset while still, m/s^2
  double still_gyro = 0.1;    // drift while still, rad/s
  double noise_fraction = 0.0;  // noise sd as a fraction of each margin

  friend bool operator==(const MotionProfile&, const MotionProfile&) = default;
};

struct ScenarioSpec {
  std::string user_id = "u00";
  std::string task_id = "t00";
  SessionMode mode = SessionMode::kTraining;
  double duration_s = 20.0;
  double fps = 30.0;
  double imu_rate_hz = 300.0;
  std::uint64_t seed = 1;
  double tau = 3.0;  // thresholds the trace is built around
  double nu = 0.5;
  double tau_margin = 0.5;
  double nu_margin = 0.1;
  double gravity_alpha = 0.9;  // low-pass used by the construction self-check
  MotionProfile motion;
  std::vector<PlantedEpisode> episodes;
  double jitter_px = 0.0;             // per-episode offset of the rendered object
  double pixel_noise = 2.0;           // amplitude of uniform pixel noise
  bool hands = true;                  // occluder entering after the interaction starts
  double interaction_delay_s = 1.2;   // interaction start after episode start
  double gaze_lead_s = 0.6;           // gaze onset before episode start
  double expert_jitter = 0.05;        // expert cut boundary offset, fraction of length

  // Throws Error(kInconsistentSpec) when the planted labels cannot hold.
  void validate() const;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

struct GeneratedScenario {
  ScenarioSpec spec;
  Session session;
  GroundTruth truth;
  std::vector<AttentionState> expected_states;
  std::vector<Episode> expected_episodes;
  std::vector<FrameRange> expert_cuts;
};

GeneratedScenario generate(const ScenarioSpec& spec);

std::string object_label(int object_id);

// Pattern for `object_id` drawn on a mid-gray canvas, centred at `center`.
void draw_object(cv::Mat& canvas, int object_id, Point2 center);

struct RandomScenarioOptions {
  int episodes = 3;
  double duration_s = 20.0;
  double min_gap_s = 1.0;
  double min_length_s = 1.0;
  double max_length_s = 4.0;
  int object_count = 9;
  double noise_fraction = 0.0;
  double jitter_px = 0.0;
  SessionMode mode = SessionMode::kTraining;
  std::string user_id = "u00";
  std::string task_id = "t00";
};

// Random layout whose episodes are long enough and far enough apart to survive
// median filtering and minimum-length pruning with default parameters.
ScenarioSpec random_scenario(std::uint64_t seed, const RandomScenarioOptions& options = {});

// `key = value` text; each `episode = start_s end_s object_id x y` line adds
// one planted episode.
ScenarioSpec read_scenario_spec(const std::filesystem::path& path);
void write_scenario_spec(const std::filesystem::path& path, const ScenarioSpec& spec);

// Writes session files (frames/, imu.csv, meta.txt), truth.csv,
// expected_timeline.csv, expert_cuts.csv and scenario.txt into `dir`.
void write_scenario(const std::filesystem::path& dir, const GeneratedScenario& scenario);

}  // namespace attnguide
