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

#include <random>

#include "attnguide/error.hpp"
#include "attnguide/eval.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

namespace attnguide {
namespace {

// Truth where `label` sits at `at` on frames [lo, hi], nothing elsewhere.
GroundTruth truth_with(std::size_t n, std::vector<std::tuple<std::size_t, std::size_t, std::string,
                                                             Point2>> spans) {
  std::vector<std::optional<Point2>> target(n);
  std::vector<std::string> label(n);
  std::vector<bool> flag(n, false), onset(n, false);
  for (const auto& [lo, hi, l, at] : spans) {
    for (std::size_t f = lo; f <= hi; ++f) {
      target[f] = at;
      label[f] = l;
    }
  }
  return make_ground_truth(target, label, flag, onset);
}

std::vector<std::optional<Box>> estimates(std::size_t n, std::size_t lo, std::size_t hi,
                                          Point2 at = kSpatialAttentionPoint) {
  std::vector<std::optional<Box>> e(n);
  for (std::size_t f = lo; f <= hi; ++f) e[f] = box_around(at);
  return e;
}

TEST(Iou, MatchesPixelCount) {
  // Two 200-px boxes offset by 100 px: overlap 100x200 over union 300x200.
  EXPECT_NEAR(iou({0, 0, 200, 200}, {100, 0, 300, 200}), 1.0 / 3.0, 1e-12);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> c(0, 40), s(1, 30);
  for (int i = 0; i < 300; ++i) {
    const int ax = c(rng), ay = c(rng), aw = s(rng), ah = s(rng);
    const int bx = c(rng), by = c(rng), bw = s(rng), bh = s(rng);
    const double expect = testing::oracle_pixel_iou(ax, ay, ax + aw, ay + ah, bx, by, bx + bw, by + bh);
    EXPECT_NEAR(iou({double(ax), double(ay), double(ax + aw), double(ay + ah)},
                    {double(bx), double(by), double(bx + bw), double(by + bh)}),
                expect, 1e-12);
  }
  EXPECT_DOUBLE_EQ(iou(box_around({10, 10}), box_around({10, 10})), 1.0);
  EXPECT_THROW(iou({0, 0, 0, 5}, {0, 0, 1, 1}), Error);
}

TEST(Discovery, TenConsecutiveFramesDiscover) {
  const auto truth = truth_with(40, {{5, 14, "cup", kSpatialAttentionPoint}});
  const auto r = object_discovery(estimates(40, 5, 14), truth);
  ASSERT_EQ(r.discovered, std::vector<std::string>{"cup"});
  EXPECT_DOUBLE_EQ(r.recall, 1.0);
  ASSERT_EQ(r.declared.size(), 1u);
  EXPECT_TRUE(r.declared[0].correct);
  EXPECT_DOUBLE_EQ(r.precision, 1.0);
}

TEST(Discovery, NineFramesThenAGapDoNot) {
  const auto truth = truth_with(40, {{5, 13, "cup", kSpatialAttentionPoint},
                                     {15, 24, "cup", kSpatialAttentionPoint}});
  auto est = estimates(40, 5, 13);
  const auto r = object_discovery(est, truth);
  EXPECT_TRUE(r.discovered.empty());
  EXPECT_TRUE(r.declared.empty());
  EXPECT_DOUBLE_EQ(r.precision, 0.0);

  // The gap in the annotation breaks the run even with a continuous estimate.
  const auto r2 = object_discovery(estimates(40, 5, 23), truth_with(40, {
      {5, 13, "cup", kSpatialAttentionPoint}, {15, 23, "cup", kSpatialAttentionPoint}}));
  EXPECT_TRUE(r2.discovered.empty());
  ASSERT_EQ(r2.declared.size(), 1u);
  EXPECT_FALSE(r2.declared[0].correct);
}

TEST(Discovery, IouThresholdIsInclusive) {
  // A 200-px box offset by 100 px gives IoU 1/3; threshold 1/3 still counts.
  const Point2 off{kSpatialAttentionPoint.x + 100, kSpatialAttentionPoint.y};
  const auto truth = truth_with(20, {{0, 19, "cup", off}});
  DiscoveryParams p;
  p.iou_threshold = 1.0 / 3.0;
  EXPECT_EQ(object_discovery(estimates(20, 0, 19), truth, p).discovered.size(), 1u);
  p.iou_threshold = 0.34;
  EXPECT_TRUE(object_discovery(estimates(20, 0, 19), truth, p).discovered.empty());
}

TEST(Discovery, AgreesWithExhaustiveOracle) {
  std::mt19937_64 rng(42);
  const std::vector<std::string> labels{"a", "b", "c"};
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 40 + rng() % 120;
    std::vector<std::optional<Point2>> target(n);
    std::vector<std::string> label(n);
    std::vector<std::optional<Box>> est(n);
    std::size_t f = 0;
    while (f < n) {
      const std::size_t len = 1 + rng() % 25;
      const bool has = rng() % 4 != 0;
      const Point2 at{kSpatialAttentionPoint.x + double(rng() % 200) - 100.0,
                      kSpatialAttentionPoint.y + double(rng() % 120) - 60.0};
      const std::string l = labels[rng() % labels.size()];
      for (std::size_t k = f; k < std::min(n, f + len); ++k) {
        if (has) {
          target[k] = at;
          label[k] = l;
        }
      }
      f += len;
    }
    f = 0;
    while (f < n) {
      const std::size_t len = 1 + rng() % 30;
      const bool on = rng() % 3 != 0;
      for (std::size_t k = f; k < std::min(n, f + len); ++k) {
        if (on) est[k] = box_around(kSpatialAttentionPoint);
      }
      f += len;
    }
    const auto truth =
        make_ground_truth(target, label, std::vector<bool>(n), std::vector<bool>(n));
    DiscoveryParams p;
    p.persistence = 1 + static_cast<int>(rng() % 12);
    const auto got = object_discovery(est, truth, p);
    const auto want =
        testing::oracle_discovery(est, truth, p.iou_threshold, p.persistence, p.aoi_size);
    EXPECT_EQ(std::set<std::string>(got.discovered.begin(), got.discovered.end()), want.discovered);
    EXPECT_EQ(got.declared.size(), want.declared);
    EXPECT_EQ(got.correct, want.correct);
    EXPECT_DOUBLE_EQ(got.precision, want.precision);
    EXPECT_DOUBLE_EQ(got.recall, want.recall);
  }
}

TEST(Discovery, LengthMismatchIsRejected) {
  const auto truth = truth_with(10, {});
  try {
    object_discovery(estimates(11, 0, 0), truth);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
}

TEST(Overlap, MatchesFrameCount) {
  const std::vector<FrameRange> same{{0, 99}};
  EXPECT_DOUBLE_EQ(snippet_overlap(same, same, 30.0).mean_percent, 100.0);
  const std::vector<FrameRange> a{{0, 99}}, b{{50, 149}};
  EXPECT_NEAR(snippet_overlap(a, b, 30.0).mean_percent, 100.0 / 3.0, 0.01);
  EXPECT_NEAR(snippet_overlap(a, b, 30.0, OverlapMode::kIntersectionOverExpert).mean_percent, 50.0,
              1e-9);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const std::size_t a0 = rng() % 100, a1 = a0 + rng() % 80, b0 = rng() % 100,
                      b1 = b0 + rng() % 80;
    for (auto mode : {OverlapMode::kIntersectionOverUnion, OverlapMode::kIntersectionOverExpert}) {
      const std::vector<FrameRange> x{{a0, a1}}, y{{b0, b1}};
      EXPECT_NEAR(snippet_overlap(x, y, 30.0, mode).per_pair_percent[0],
                  testing::oracle_frame_overlap(a0, a1, b0, b1,
                                                mode == OverlapMode::kIntersectionOverExpert),
                  1e-9);
    }
  }
}

TEST(Overlap, LengthsAndPairing) {
  const std::vector<FrameRange> a{{0, 30}, {100, 160}}, b{{0, 60}, {100, 130}};
  const auto r = snippet_overlap(a, b, 30.0);
  EXPECT_NEAR(r.automatic_length_s.mean, 1.5, 1e-12);
  EXPECT_NEAR(r.expert_length_s.mean, 1.5, 1e-12);
  ASSERT_EQ(r.per_pair_percent.size(), 2u);
  const std::vector<FrameRange> one{{0, 30}};
  try {
    snippet_overlap(a, one, 30.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnpairedCuts);
  }
  EXPECT_EQ(parse_overlap_mode(to_string(OverlapMode::kIntersectionOverExpert)),
            OverlapMode::kIntersectionOverExpert);
  EXPECT_THROW(parse_overlap_mode("dice"), Error);
  EXPECT_NE(overlap_table("espresso", r).find("espresso"), std::string::npos);
}

TEST(LeadTime, ThirtySixFramesAtThirtyFps) {
  std::vector<std::optional<Point2>> target(200);
  std::vector<std::string> label(200);
  std::vector<bool> flag(200, false), onset(200, false);
  for (std::size_t f = 76; f <= 120; ++f) {
    flag[f] = true;
    label[f] = "valve";
  }
  onset[22] = true;
  const auto truth = make_ground_truth(target, label, flag, onset);
  ASSERT_EQ(truth.interactions.size(), 1u);
  EXPECT_EQ(truth.interactions[0].gaze_onset, 22u);
  const std::vector<Episode> episodes{{40, 130}};
  const auto r = lead_time_analysis(episodes, truth, 30.0);
  EXPECT_EQ(r.matched, 1u);
  EXPECT_NEAR(r.lead.mean, 1.2, 1e-12);
  EXPECT_NEAR(r.gaze_lag.mean, 0.6, 1e-12);
  ASSERT_EQ(r.lead_histogram.size(), 1u);
  EXPECT_NEAR(r.lead_histogram[0].lo, 1.2, 1e-9);

  const std::vector<Episode> late{{80, 130}};
  const auto missed = lead_time_analysis(late, truth, 30.0);
  EXPECT_EQ(missed.missed, 1u);
  EXPECT_FALSE(missed.per_interaction[0].lead_s);
}

TEST(Histogram, Bins) {
  const std::vector<double> v{0.0, 0.1, 0.19, 0.2, 0.61};
  const auto h = histogram(v, 0.2);
  ASSERT_EQ(h.size(), 4u);
  EXPECT_EQ(h[0].count, 3u);
  EXPECT_EQ(h[1].count, 1u);
  EXPECT_EQ(h[2].count, 0u);
  EXPECT_EQ(h[3].count, 1u);
  EXPECT_TRUE(histogram({}, 0.2).empty());
  EXPECT_THROW(histogram(v, 0.0), Error);
}

TEST(Summary, SampleStandardDeviation) {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  const auto s = summarize(v);
  EXPECT_EQ(s.count, 8u);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_NEAR(s.sd, std::sqrt(32.0 / 7.0), 1e-12);
  EXPECT_EQ(summarize(std::vector<double>{3.0}).sd, 0.0);
}

TEST(MultiUser, MatrixCounts) {
  const std::vector<std::string> objects{"a", "b", "c"};
  const std::vector<UserDiscovery> users{
      {"u1", objects, {"a", "b"}}, {"u2", objects, {"c"}}, {"u3", {}, {"a", "b", "c"}}};
  const auto r = multi_user_matrix(users, objects);
  EXPECT_EQ(r.per_user_count, (std::vector<std::size_t>{2, 1, 3}));
  EXPECT_EQ(r.per_object_count, (std::vector<std::size_t>{2, 2, 2}));
  EXPECT_DOUBLE_EQ(r.per_user.mean, 2.0);
  EXPECT_NEAR(r.pooled_recall, 6.0 / 9.0, 1e-12);
  EXPECT_TRUE(r.hits[2][1]);
  EXPECT_FALSE(r.hits[2][0]);
}

TEST(MultiUser, LabelMismatchNamesTheLabels) {
  const std::vector<std::string> objects{"a", "b"};
  const std::vector<UserDiscovery> users{{"u1", {"a", "x"}, {"a"}}};
  try {
    multi_user_matrix(users, objects);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLabelMismatch);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("+ x"), std::string::npos);
    EXPECT_NE(msg.find("- b"), std::string::npos);
  }
}

TEST(CheckLabels, ReportsDifferences) {
  const std::vector<std::string> want{"a", "b"}, same{"b", "a"}, other{"a", "z"};
  EXPECT_NO_THROW(check_labels(want, same, "t"));
  try {
    check_labels(want, other, "truth.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLabelMismatch);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("truth.csv"), std::string::npos);
    EXPECT_NE(msg.find("+ z"), std::string::npos);
    EXPECT_NE(msg.find("- b"), std::string::npos);
  }
}

TEST(GroundTruthCsv, RoundTrip) {
  testing::TempDir dir("truth");
  std::vector<std::optional<Point2>> target(30);
  std::vector<std::string> label(30);
  std::vector<bool> flag(30, false), onset(30, false);
  for (std::size_t f = 5; f < 20; ++f) {
    target[f] = Point2{100.5, 80.25};
    label[f] = "knob";
  }
  for (std::size_t f = 10; f < 15; ++f) flag[f] = true;
  onset[7] = true;
  const auto truth = make_ground_truth(target, label, flag, onset);
  write_ground_truth_csv(dir / "t.csv", truth);
  const auto back = read_ground_truth_csv(dir / "t.csv");
  EXPECT_EQ(back.target, truth.target);
  EXPECT_EQ(back.label, truth.label);
  EXPECT_EQ(back.interactions, truth.interactions);
  EXPECT_EQ(back.objects(), std::vector<std::string>{"knob"});

  testing::write_file(dir / "bad.csv",
                      "frame_index,target_x,target_y,object_label,interaction_flag,gaze_onset_flag\n"
                      "0,1,,a,0,0\n");
  EXPECT_THROW(read_ground_truth_csv(dir / "bad.csv"), Error);
}

TEST(Reports, DiscoveryJsonRoundTrip) {
  const auto truth = truth_with(40, {{5, 14, "cup", kSpatialAttentionPoint},
                                     {20, 30, "pan", {500, 300}}});
  const auto r = object_discovery(estimates(40, 5, 14), truth);
  const auto parsed = parse_discovery_json(discovery_json(r, "u7"), "mem");
  EXPECT_EQ(parsed.user_id, "u7");
  EXPECT_EQ(parsed.discovered, r.discovered);
  EXPECT_EQ(parsed.objects, r.objects);
  EXPECT_THROW(parse_discovery_json("{", "mem"), Error);
}

}  // namespace
}  // namespace attnguide
