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

// Frame-ordered replay of the two operating modes.
//
// Training: attention -> snippet cut -> model trained on the first frame of
// each episode -> guide stored.
// Assistive: attention gates detection on attending frames; the best match
// above the threshold selects a guide, which "plays" for cooldown_frames
// during which no detection is attempted.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "attnguide/attention.hpp"
#include "attnguide/detector.hpp"
#include "attnguide/guidestore.hpp"
#include "attnguide/ingest.hpp"
#include "attnguide/snippets.hpp"

namespace attnguide {

enum class EventKind {
  kEpisodeStarted,
  kEpisodeEnded,
  kGuideTrained,
  kTrainingSkipped,
  kDetectionFired,
  kGuidePlayed,
  kNothing,
};

std::string to_string(EventKind kind);
EventKind parse_event_kind(const std::string& text);

struct RuntimeEvent {
  std::size_t frame_index = 0;
  EventKind kind = EventKind::kNothing;
  std::string guide_id;
  std::string model_id;
  std::optional<double> score;

  friend bool operator==(const RuntimeEvent&, const RuntimeEvent&) = default;
};

struct RuntimeParams {
  AttentionParams attention;
  DetectorParams detector;  // detector.threshold is the single detection knob
  SnippetOptions snippets;
  int cooldown_frames = 90;
  int detect_every_n = 1;
  // Prefix of each guide's media_ref, typically the frames directory.
  std::string media_source = "session";

  void validate() const;
};

struct TrainingResult {
  GuideStore store;
  std::vector<RuntimeEvent> events;
  AttentionTimeline timeline;
  std::vector<Snippet> snippets;
};

// Requires a training-mode session. Episodes whose first frame cannot be
// trained produce a kTrainingSkipped event instead of a guide.
TrainingResult run_training(const Session& session, const RuntimeParams& params,
                            GuideStore store);

// Called for every frame on which detection ran.
struct DetectionAttempt {
  const Frame& frame;
  const SearchIndex& index;
  std::span<const Detection> detections;
  const std::optional<GuideChoice>& choice;
};
using AttemptObserver = std::function<void(const DetectionAttempt&)>;

struct AssistResult {
  std::vector<RuntimeEvent> events;
  AttentionTimeline timeline;
  std::size_t attempts = 0;
  std::vector<double> attempt_ms;  // processing time of each attempt, excluding decode
};

// Requires an assistive-mode session and a non-empty store.
AssistResult run_assistive(const Session& session, const RuntimeParams& params,
                           const GuideStore& store, const AttemptObserver& observer = {});

struct LatencyReport {
  std::size_t frames = 0;
  std::size_t attempts = 0;
  std::size_t models = 0;
  double p50_ms = 0.0;
  double p99_ms = 0.0;
  double max_ms = 0.0;
  double mean_ms = 0.0;
  double budget_ms = 33.0;
  bool within_budget = true;  // p99_ms <= budget_ms
};

LatencyReport per_frame_budget_check(const Session& session, const RuntimeParams& params,
                                     const GuideStore& store);

// Nearest-rank percentile, q in [0, 100]; 0 for an empty input.
double percentile(std::vector<double> values, double q);

// CSV `frame_index,kind,guide_id,model_id,score`; empty fields when absent.
std::string format_event_log(std::span<const RuntimeEvent> events);
void write_event_log(const std::filesystem::path& path, std::span<const RuntimeEvent> events);
std::vector<RuntimeEvent> read_event_log(const std::filesystem::path& path);

}  // namespace attnguide
