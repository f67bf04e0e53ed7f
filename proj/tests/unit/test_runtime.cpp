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
#include <cmath>
#include <memory>

#include "attnguide/error.hpp"
#include "attnguide/runtime.hpp"
#include "attnguide/synth.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

namespace attnguide {
namespace {

ScenarioSpec three_objects(SessionMode mode, std::uint64_t seed = 5) {
  ScenarioSpec s;
  s.seed = seed;
  s.mode = mode;
  s.user_id = mode == SessionMode::kTraining ? "expert" : "novice";
  s.task_id = "bench";
  s.episodes = {{2.0, 5.0, 1}, {8.0, 11.0, 4}, {14.0, 17.0, 7}};
  return s;
}

std::size_t count(const std::vector<RuntimeEvent>& events, EventKind kind) {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [&](const auto& e) { return e.kind == kind; }));
}

class BlankSource final : public FrameSource {
 public:
  explicit BlankSource(std::size_t n) : n_(n) {}
  std::size_t size() const override { return n_; }
  cv::Mat image(std::size_t) const override {
    return cv::Mat(kCanonicalHeight, kCanonicalWidth, CV_8UC1, cv::Scalar(128));
  }

 private:
  std::size_t n_;
};

const TrainingResult& trained() {
  static const TrainingResult r =
      run_training(generate(three_objects(SessionMode::kTraining)).session, {}, {});
  return r;
}

TEST(Training, OneGuidePerEpisode) {
  const auto& r = trained();
  ASSERT_EQ(r.timeline.episodes.size(), 3u);
  EXPECT_EQ(r.store.size(), 3u);
  EXPECT_EQ(count(r.events, EventKind::kGuideTrained), 3u);
  EXPECT_EQ(count(r.events, EventKind::kEpisodeStarted), 3u);
  EXPECT_EQ(count(r.events, EventKind::kEpisodeEnded), 3u);
  for (const auto& g : r.store.guides()) {
    EXPECT_EQ(g.model.model_id, "m-" + g.guide_id);
    EXPECT_EQ(g.provenance.user_id, "expert");
    EXPECT_EQ(g.snippet.training_frame, g.snippet.episode.start);
    EXPECT_EQ(g.guide_id.rfind("expert-bench-", 0), 0u);
  }
}

TEST(Training, NoAttentionMeansNoEvents) {
  auto moving = [](double t) {
    ImuSample s;
    s.accel = {4.5 * std::cos(6.0 * t), 4.5 * std::sin(6.0 * t), 9.81};
    s.gyro = {0.0, 1.2, 0.0};
    return s;
  };
  const auto session = testing::imu_session(300, 30.0, 300.0, moving);
  const auto r = run_training(session, {}, {});
  EXPECT_TRUE(r.events.empty());
  EXPECT_TRUE(r.store.empty());
}

TEST(Training, FeaturelessEpisodeIsSkipped) {
  const auto g = generate(three_objects(SessionMode::kTraining));
  const Session blank(g.session.frames(), g.session.imu(), g.session.meta(),
                      std::make_shared<BlankSource>(g.session.frame_count()));
  const auto r = run_training(blank, {}, {});
  EXPECT_TRUE(r.store.empty());
  EXPECT_EQ(count(r.events, EventKind::kTrainingSkipped), 3u);
  EXPECT_EQ(count(r.events, EventKind::kGuideTrained), 0u);
}

TEST(Training, IdsStayFreshAcrossRuns) {
  const auto session = generate(three_objects(SessionMode::kTraining)).session;
  const auto again = run_training(session, {}, trained().store);
  EXPECT_EQ(again.store.size(), 6u);
}

TEST(Training, RejectsAssistiveSession) {
  const auto session = generate(three_objects(SessionMode::kAssistive)).session;
  try {
    run_training(session, {}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
}

TEST(Assist, PlaysTheGuideOfTheObjectInView) {
  const auto& store = trained().store;
  const auto r = run_assistive(generate(three_objects(SessionMode::kAssistive, 11)).session, {},
                               store);
  std::vector<std::string> played;
  for (const auto& e : r.events) {
    if (e.kind != EventKind::kGuidePlayed) continue;
    played.push_back(store.find(e.guide_id)->snippet.snippet_id);
    EXPECT_GE(*e.score, RuntimeParams{}.detector.threshold);
  }
  ASSERT_EQ(played.size(), 3u);
  const auto& guides = store.guides();
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(played[i], guides[i].snippet.snippet_id);
}

TEST(Assist, PureMotionNeverAttempts) {
  auto moving = [](double t) {
    ImuSample s;
    s.accel = {4.5 * std::cos(6.0 * t), 4.5 * std::sin(6.0 * t), 9.81};
    s.gyro = {0.0, 1.2, 0.0};
    return s;
  };
  const auto session = testing::imu_session(300, 30.0, 300.0, moving, SessionMode::kAssistive);
  const auto r = run_assistive(session, {}, trained().store);
  EXPECT_EQ(r.attempts, 0u);
  EXPECT_EQ(count(r.events, EventKind::kDetectionFired), 0u);
}

TEST(Assist, CooldownSuppressesRepeats) {
  ScenarioSpec s = three_objects(SessionMode::kAssistive, 13);
  s.episodes = {{2.0, 8.0, 4}};
  RuntimeParams p;
  p.cooldown_frames = 10000;
  const auto r = run_assistive(generate(s).session, p, trained().store);
  EXPECT_EQ(count(r.events, EventKind::kGuidePlayed), 1u);

  p.cooldown_frames = 30;
  const auto r2 = run_assistive(generate(s).session, p, trained().store);
  EXPECT_GT(count(r2.events, EventKind::kGuidePlayed), 1u);
  std::optional<std::size_t> last;
  for (const auto& e : r2.events) {
    if (e.kind != EventKind::kGuidePlayed) continue;
    if (last) {
      EXPECT_GT(e.frame_index, *last + 30);
    }
    last = e.frame_index;
  }
}

TEST(Assist, DetectsOnlyOnAttendingFrames) {
  const auto session = generate(three_objects(SessionMode::kAssistive, 17)).session;
  std::vector<std::size_t> frames;
  RuntimeParams p;
  p.detect_every_n = 3;
  const auto r = run_assistive(session, p, trained().store,
                               [&](const DetectionAttempt& a) { frames.push_back(a.frame.index); });
  ASSERT_FALSE(frames.empty());
  EXPECT_EQ(frames.size(), r.attempts);
  EXPECT_EQ(r.attempt_ms.size(), r.attempts);
  for (auto f : frames) {
    EXPECT_TRUE(is_attending(r.timeline.filtered[f])) << f;
    EXPECT_EQ(f % 3, 0u);
  }
}

TEST(Assist, EmptyStoreIsAPreconditionError) {
  const auto session = generate(three_objects(SessionMode::kAssistive)).session;
  try {
    run_assistive(session, {}, GuideStore{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
}

TEST(Assist, ReplayIsDeterministic) {
  const auto session = generate(three_objects(SessionMode::kAssistive, 19)).session;
  const auto a = run_assistive(session, {}, trained().store);
  const auto b = run_assistive(session, {}, trained().store);
  EXPECT_EQ(format_event_log(a.events), format_event_log(b.events));
}

TEST(Assist, ReplayOfTheTrainingSessionRecognisesEachEpisode) {
  const auto g = generate(three_objects(SessionMode::kTraining));
  SessionMeta meta = g.session.meta();
  meta.mode = SessionMode::kAssistive;
  const Session replay(g.session.frames(), g.session.imu(), meta,
                       std::make_shared<InMemoryFrameSource>([&] {
                         std::vector<cv::Mat> images;
                         for (std::size_t f = 0; f < g.session.frame_count(); ++f)
                           images.push_back(g.session.frame(f).image);
                         return images;
                       }()));
  const auto r = run_assistive(replay, {}, trained().store);
  std::vector<std::string> played;
  for (const auto& e : r.events)
    if (e.kind == EventKind::kGuidePlayed) played.push_back(e.guide_id);
  ASSERT_EQ(played.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(played[i], trained().store.guides()[i].guide_id);
}

TEST(EventLog, RoundTrip) {
  testing::TempDir dir("events");
  const std::vector<RuntimeEvent> events{
      {0, EventKind::kEpisodeStarted, {}, {}, {}},
      {3, EventKind::kDetectionFired, "g", "m-g", 0.8125},
      {3, EventKind::kGuidePlayed, "g", "m-g", 0.8125},
      {4, EventKind::kTrainingSkipped, {}, {}, {}},
      {9, EventKind::kEpisodeEnded, {}, {}, {}},
  };
  write_event_log(dir / "e.csv", events);
  EXPECT_EQ(read_event_log(dir / "e.csv"), events);
  for (auto k : {EventKind::kEpisodeStarted, EventKind::kEpisodeEnded, EventKind::kGuideTrained,
                 EventKind::kTrainingSkipped, EventKind::kDetectionFired, EventKind::kGuidePlayed,
                 EventKind::kNothing}) {
    EXPECT_EQ(parse_event_kind(to_string(k)), k);
  }
  testing::write_file(dir / "bad.csv", "frame_index,kind,guide_id,model_id,score\n1,dance,,,\n");
  EXPECT_THROW(read_event_log(dir / "bad.csv"), Error);
}

TEST(Percentile, NearestRank) {
  EXPECT_EQ(percentile({}, 50), 0.0);
  EXPECT_EQ(percentile({5.0}, 99), 5.0);
  std::vector<double> v;
  for (int i = 100; i >= 1; --i) v.push_back(i);
  EXPECT_EQ(percentile(v, 50), 50.0);
  EXPECT_EQ(percentile(v, 99), 99.0);
  EXPECT_EQ(percentile(v, 100), 100.0);
  EXPECT_EQ(percentile(v, 0), 1.0);
}

TEST(Params, Validation) {
  RuntimeParams p;
  p.cooldown_frames = -1;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.detect_every_n = 0;
  EXPECT_THROW(p.validate(), Error);
}

}  // namespace
}  // namespace attnguide
