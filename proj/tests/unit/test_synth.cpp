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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "attnguide/error.hpp"
#include "attnguide/synth.hpp"
#include "temp_dir.hpp"

namespace attnguide {
namespace {

namespace fs = std::filesystem;

ScenarioSpec small() {
  ScenarioSpec s;
  s.duration_s = 8.0;
  s.seed = 21;
  s.episodes = {{1.0, 3.0, 2}, {5.0, 7.0, 6}};
  return s;
}

TEST(Synth, SameSpecSameBytes) {
  testing::TempDir a("synth_a"), b("synth_b");
  write_scenario(a.path(), generate(small()));
  write_scenario(b.path(), generate(small()));
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a.path())) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a.path());
    EXPECT_EQ(testing::read_file(entry.path()), testing::read_file(b.path() / rel)) << rel;
    ++files;
  }
  EXPECT_GT(files, 240u);
  for (const char* name : {"imu.csv", "meta.txt", "truth.csv", "expert_cuts.csv", "scenario.txt",
                           "expected_timeline.csv"}) {
    EXPECT_TRUE(fs::exists(a / name)) << name;
  }
}

TEST(Synth, SeedChangesTheTrace) {
  auto s = small();
  const auto one = generate(s);
  s.seed = 22;
  const auto two = generate(s);
  EXPECT_NE(one.session.imu(), two.session.imu());
}

TEST(Synth, LabelsHoldWithMargin) {
  const auto spec = small();
  const auto g = generate(spec);
  const auto signal = compute_motion_signal(g.session, {});
  double max_still_accel = 0.0, max_still_gyro = 0.0, min_moving_gyro = 1e9;
  for (std::size_t f = 0; f < signal.size(); ++f) {
    if (is_attending(g.expected_states[f])) {
      max_still_accel = std::max(max_still_accel, signal.accel[f]);
      max_still_gyro = std::max(max_still_gyro, signal.angular[f]);
    } else {
      min_moving_gyro = std::min(min_moving_gyro, signal.angular[f]);
    }
  }
  EXPECT_LE(max_still_accel, spec.tau - spec.tau_margin);
  EXPECT_LE(max_still_gyro, spec.nu - spec.nu_margin);
  EXPECT_GE(min_moving_gyro, spec.nu + spec.nu_margin);
}

TEST(Synth, PipelineRecoversPlantedEpisodes) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (double noise : {0.0, 0.1}) {
      RandomScenarioOptions o;
      o.noise_fraction = noise;
      const auto g = generate(random_scenario(seed, o));
      const auto tl = compute_timeline(g.session, {});
      EXPECT_EQ(tl.episodes, g.expected_episodes) << seed << " " << noise;
      EXPECT_EQ(tl.filtered, g.expected_states) << seed << " " << noise;
    }
  }
}

TEST(Synth, PlantedFramesFollowTheCeilRule) {
  const auto g = generate(small());
  ASSERT_EQ(g.expected_episodes.size(), 2u);
  EXPECT_EQ(g.expected_episodes[0], (Episode{30, 89}));
  EXPECT_EQ(g.expected_episodes[1], (Episode{150, 209}));
  ASSERT_EQ(g.truth.interactions.size(), 2u);
  EXPECT_EQ(g.truth.interactions[0].start, 30u + 36u);
  EXPECT_EQ(g.truth.interactions[0].gaze_onset, 30u - 18u);
  EXPECT_EQ(g.truth.interactions[0].label, object_label(2));
  EXPECT_EQ(g.expert_cuts.size(), 2u);
}

TEST(Synth, InconsistentSpecIsRejected) {
  auto expect_inconsistent = [](const ScenarioSpec& s) {
    try {
      generate(s);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInconsistentSpec);
    }
  };
  auto s = small();
  s.motion.still_gyro = 0.45;  // above nu - margin
  expect_inconsistent(s);
  s = small();
  s.motion.motion_gyro = 0.55;  // below nu + margin
  expect_inconsistent(s);
  s = small();
  s.episodes = {{3.0, 4.0, 0}, {3.5, 5.0, 1}};
  expect_inconsistent(s);
  s = small();
  s.episodes = {{7.0, 9.0, 0}};
  expect_inconsistent(s);
}

TEST(Synth, SpecFileRoundTrip) {
  testing::TempDir dir("spec");
  auto s = small();
  s.mode = SessionMode::kAssistive;
  s.jitter_px = 3.5;
  s.motion.noise_fraction = 0.1;
  s.hands = false;
  write_scenario_spec(dir / "s.txt", s);
  EXPECT_EQ(read_scenario_spec(dir / "s.txt"), s);
  testing::write_file(dir / "bad.txt", "duration_s = banana\n");
  EXPECT_THROW(read_scenario_spec(dir / "bad.txt"), Error);
}

TEST(Synth, ObjectsAreDistinct) {
  std::vector<std::string> labels;
  for (int k = 0; k < 9; ++k) labels.push_back(object_label(k));
  std::sort(labels.begin(), labels.end());
  EXPECT_EQ(std::unique(labels.begin(), labels.end()), labels.end());
  cv::Mat a(360, 640, CV_8UC1, cv::Scalar(110)), b = a.clone();
  draw_object(a, 0, kSpatialAttentionPoint);
  draw_object(b, 1, kSpatialAttentionPoint);
  EXPECT_GT(cv::norm(a, b, cv::NORM_L1), 0.0);
}

}  // namespace
}  // namespace attnguide
