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

// Offline metrics: object discovery, interaction lead time, multi-user
// discovery aggregation and automatic-vs-expert snippet overlap.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "attnguide/attention.hpp"
#include "attnguide/snippets.hpp"
#include "attnguide/types.hpp"

namespace attnguide {

// Continuous axis-aligned box.
struct Box {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }

  friend bool operator==(const Box&, const Box&) = default;
};

Box box_around(Point2 center, double size = kAoiSize);

// Intersection over union. Throws Error(kInvalidArgument) for a box without
// positive area.
double iou(const Box& a, const Box& b);

struct Interaction {
  std::size_t start = 0;  // inclusive frame range
  std::size_t end = 0;
  std::string label;
  std::optional<std::size_t> gaze_onset;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

// Per-frame annotations. The target is where the wearer's attention really
// was (for instance a tracked marker) and `label` names the object it sits on.
struct GroundTruth {
  std::vector<std::optional<Point2>> target;
  std::vector<std::string> label;
  std::vector<Interaction> interactions;

  std::size_t size() const { return target.size(); }
  // Sorted distinct non-empty labels.
  std::vector<std::string> objects() const;
};

// Builds the interaction list from per-frame flags: maximal runs of flagged
// frames with one label; each run takes the latest onset flag after the
// previous interaction and at or before its own start.
GroundTruth make_ground_truth(std::vector<std::optional<Point2>> target,
                              std::vector<std::string> label,
                              const std::vector<bool>& interaction_flag,
                              const std::vector<bool>& gaze_onset_flag);

// CSV `frame_index,target_x,target_y,object_label,interaction_flag,gaze_onset_flag`;
// empty target fields mean no annotation.
GroundTruth read_ground_truth_csv(const std::filesystem::path& path);
void write_ground_truth_csv(const std::filesystem::path& path, const GroundTruth& truth);

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 below two values
};

SummaryStats summarize(std::span<const double> values);

struct DiscoveryParams {
  double iou_threshold = 0.30;
  int persistence = 10;  // consecutive frames
  double aoi_size = kAoiSize;
};

struct DeclaredRun {
  std::size_t start = 0;
  std::size_t end = 0;
  std::optional<std::string> object;  // best-overlapping ground-truth object
  bool correct = false;
};

struct DiscoveryResult {
  std::vector<std::string> objects;     // ground-truth objects
  std::vector<std::string> discovered;  // sorted
  std::vector<DeclaredRun> declared;
  std::size_t correct = 0;
  double precision = 0.0;  // 0 when nothing was declared
  double recall = 0.0;
  std::size_t missing_truth_frames = 0;  // inside interactions, without a target
};

// Per-frame estimated AOI: present on filtered attending frames only.
std::vector<std::optional<Box>> estimates_from_timeline(const AttentionTimeline& timeline,
                                                        Point2 point = kSpatialAttentionPoint,
                                                        double size = kAoiSize);

// An object is discovered when at least `persistence` consecutive frames have
// IoU >= threshold between the estimate and the object's ground-truth AOI.
// Declared discoveries are the maximal runs of present estimates lasting at
// least `persistence` frames; each is attributed to the object with the
// largest summed IoU over the run and is correct when that object is
// discovered inside the run.
DiscoveryResult object_discovery(std::span<const std::optional<Box>> estimates,
                                 const GroundTruth& truth, const DiscoveryParams& params = {});

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width);

struct InteractionLead {
  std::size_t interaction = 0;
  std::optional<std::size_t> episode;
  std::optional<double> lead_s;      // interaction start - episode start
  std::optional<double> gaze_lag_s;  // episode start - gaze onset
};

struct LeadTimeReport {
  std::vector<InteractionLead> per_interaction;
  std::size_t matched = 0;
  std::size_t missed = 0;
  SummaryStats lead;
  SummaryStats gaze_lag;
  std::vector<HistogramBin> lead_histogram;
  std::vector<HistogramBin> gaze_lag_histogram;
};

// Each interaction is matched to the episode that starts at or before it and
// is still running when it starts.
LeadTimeReport lead_time_analysis(std::span<const Episode> episodes, const GroundTruth& truth,
                                  double fps, double histogram_bin_s = 0.2);
LeadTimeReport lead_time_analysis(const AttentionTimeline& timeline, const GroundTruth& truth,
                                  double fps, double histogram_bin_s = 0.2);

struct UserDiscovery {
  std::string user_id;
  std::vector<std::string> objects;  // the user's ground-truth objects; empty = unknown
  std::vector<std::string> discovered;
};

struct MultiUserReport {
  std::vector<std::string> objects;
  std::vector<std::string> users;
  std::vector<std::vector<bool>> hits;  // [object][user]
  std::vector<std::size_t> per_user_count;
  std::vector<std::size_t> per_object_count;
  SummaryStats per_user;
  double pooled_recall = 0.0;  // hits / (objects * users)
};

// Throws Error(kLabelMismatch) naming the offending labels when a user's
// objects or discoveries do not match `common_objects`.
// Throws Error(kLabelMismatch) listing unexpected (+) and absent (-) labels.
void check_labels(std::span<const std::string> expected, std::span<const std::string> actual,
                  const std::string& origin);

MultiUserReport multi_user_matrix(std::span<const UserDiscovery> users,
                                  std::span<const std::string> common_objects);

enum class OverlapMode { kIntersectionOverUnion, kIntersectionOverExpert };

std::string to_string(OverlapMode mode);
OverlapMode parse_overlap_mode(const std::string& text);

struct OverlapReport {
  OverlapMode mode = OverlapMode::kIntersectionOverUnion;
  std::vector<double> per_pair_percent;
  double mean_percent = 0.0;
  SummaryStats automatic_length_s;
  SummaryStats expert_length_s;
};

// Pairs cuts by position; frame ranges are inclusive. Lengths are
// (end - start) / fps. Throws Error(kUnpairedCuts) on a count mismatch.
OverlapReport snippet_overlap(std::span<const FrameRange> automatic,
                              std::span<const FrameRange> expert, double fps,
                              OverlapMode mode = OverlapMode::kIntersectionOverUnion);
OverlapReport snippet_overlap(std::span<const Snippet> automatic,
                              std::span<const FrameRange> expert, double fps,
                              OverlapMode mode = OverlapMode::kIntersectionOverUnion);

// CSV `start,end` (inclusive frame indices).
std::vector<FrameRange> read_cuts_csv(const std::filesystem::path& path);
void write_cuts_csv(const std::filesystem::path& path, std::span<const FrameRange> cuts);

// Machine-readable (JSON) and plain-text report emission.
std::string discovery_json(const DiscoveryResult& result, const std::string& user_id = "");
UserDiscovery parse_discovery_json(const std::string& text, const std::string& origin);
std::string discovery_summary(const DiscoveryResult& result);
std::string lead_time_json(const LeadTimeReport& report);
std::string lead_time_summary(const LeadTimeReport& report);
std::string multi_user_json(const MultiUserReport& report);
std::string multi_user_summary(const MultiUserReport& report);
std::string overlap_json(const OverlapReport& report);
// Table with task, condition, mean(+-sd) length and overlap percentage.
std::string overlap_table(const std::string& task, const OverlapReport& report);

}  // namespace attnguide
