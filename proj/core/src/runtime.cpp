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

#include "attnguide/runtime.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "attnguide/error.hpp"
#include "text_io.hpp"

namespace attnguide {

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kEpisodeStarted: return "episode_started";
    case EventKind::kEpisodeEnded: return "episode_ended";
    case EventKind::kGuideTrained: return "guide_trained";
    case EventKind::kTrainingSkipped: return "training_skipped";
    case EventKind::kDetectionFired: return "detection_fired";
    case EventKind::kGuidePlayed: return "guide_played";
    case EventKind::kNothing: return "nothing";
  }
  return "nothing";
}

EventKind parse_event_kind(const std::string& text) {
  for (auto k : {EventKind::kEpisodeStarted, EventKind::kEpisodeEnded, EventKind::kGuideTrained,
                 EventKind::kTrainingSkipped, EventKind::kDetectionFired, EventKind::kGuidePlayed,
                 EventKind::kNothing}) {
    if (to_string(k) == text) return k;
  }
  throw Error(ErrorCode::kCorruptFile, "unknown event kind '" + text + "'");
}

void RuntimeParams::validate() const {
  attention.validate();
  detector.validate();
  if (cooldown_frames < 0) throw Error(ErrorCode::kInvalidArgument, "cooldown must be >= 0");
  if (detect_every_n < 1) throw Error(ErrorCode::kInvalidArgument, "detect-every-n must be >= 1");
}

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "x" : out;
}

std::string fresh_id(const GuideStore& store, const std::string& base) {
  std::string id = base;
  for (int k = 2; store.find(id) || store.find_by_model("m-" + id); ++k) {
    id = base + "-" + std::to_string(k);
  }
  return id;
}

}  // namespace

TrainingResult run_training(const Session& session, const RuntimeParams& params,
                            GuideStore store) {
  params.validate();
  if (session.meta().mode != SessionMode::kTraining) {
    throw Error(ErrorCode::kPrecondition, "run_training needs a training-mode session");
  }
  TrainingResult result;
  result.timeline = compute_timeline(session, params.attention);
  result.snippets = cut_snippets(session, result.timeline, params.snippets);
  const auto attention = spatial_attention();
  const auto& meta = session.meta();

  for (const auto& snippet : result.snippets) {
    const std::size_t start = snippet.episode.start;
    result.events.push_back({start, EventKind::kEpisodeStarted, {}, {}, {}});

    const Frame frame = session.frame(snippet.training_frame);
    const std::string guide_id =
        fresh_id(store, sanitize(meta.user_id) + "-" + sanitize(meta.task_id) + "-" +
                            snippet.snippet_id);
    const std::string model_id = "m-" + guide_id;
    const Nanos trained_at = meta.start_time_ns + frame.t;
    try {
      Guide g;
      g.guide_id = guide_id;
      g.model = train_model(frame, attention, model_id,
                            ModelSource{meta.user_id, snippet.snippet_id, snippet.training_frame},
                            trained_at, params.detector);
      g.snippet = snippet;
      g.media_ref = params.media_source + "#" + std::to_string(snippet.media.start) + "-" +
                    std::to_string(snippet.media.end);
      g.provenance = {meta.user_id, meta.task_id, trained_at};
      store.add(std::move(g));
      result.events.push_back({start, EventKind::kGuideTrained, guide_id, model_id, {}});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInsufficientStructure) throw;
      result.events.push_back({start, EventKind::kTrainingSkipped, {}, {}, {}});
    }
    result.events.push_back({snippet.episode.end, EventKind::kEpisodeEnded, {}, {}, {}});
  }
  result.store = std::move(store);
  return result;
}

AssistResult run_assistive(const Session& session, const RuntimeParams& params,
                           const GuideStore& store, const AttemptObserver& observer) {
  params.validate();
  if (session.meta().mode != SessionMode::kAssistive) {
    throw Error(ErrorCode::kPrecondition, "run_assistive needs an assistive-mode session");
  }
  if (store.empty()) throw Error(ErrorCode::kPrecondition, "assistive mode needs a non-empty store");

  AssistResult result;
  result.timeline = compute_timeline(session, params.attention);
  const auto& tl = result.timeline;
  const auto attention = spatial_attention();
  const auto models = store.models();

  std::size_t next_allowed = 0;  // first frame after the current cooldown
  for (std::size_t f = 0; f < session.frame_count(); ++f) {
    const auto ep = tl.episode_of(f);
    if (ep && tl.episodes[*ep].start == f) {
      result.events.push_back({f, EventKind::kEpisodeStarted, {}, {}, {}});
    }
    const bool attempt = is_attending(tl.filtered[f]) && f >= next_allowed &&
                         f % static_cast<std::size_t>(params.detect_every_n) == 0;
    if (attempt) {
      const Frame frame = session.frame(f);
      const auto t0 = std::chrono::steady_clock::now();
      const SearchIndex index(frame, attention.aoi, params.detector);
      auto detections = detect(index, models);
      std::sort(detections.begin(), detections.end(), [](const Detection& a, const Detection& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.model_id < b.model_id;
      });
      const auto choice = select_guide(detections, store);
      const auto t1 = std::chrono::steady_clock::now();
      result.attempt_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      ++result.attempts;

      for (const auto& d : detections) {
        const Guide* g = store.find_by_model(d.model_id);
        result.events.push_back(
            {f, EventKind::kDetectionFired, g ? g->guide_id : "", d.model_id, d.score});
      }
      if (choice) {
        result.events.push_back(
            {f, EventKind::kGuidePlayed, choice->guide_id, choice->model_id, choice->score});
        next_allowed = f + static_cast<std::size_t>(params.cooldown_frames) + 1;
      }
      if (observer) observer(DetectionAttempt{frame, index, detections, choice});
    }
    if (ep && tl.episodes[*ep].end == f) {
      result.events.push_back({f, EventKind::kEpisodeEnded, {}, {}, {}});
    }
  }
  return result;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(q / 100.0 * static_cast<double>(values.size()));
  const auto idx = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(values.size())));
  return values[idx - 1];
}

LatencyReport per_frame_budget_check(const Session& session, const RuntimeParams& params,
                                     const GuideStore& store) {
  const auto result = run_assistive(session, params, store);
  LatencyReport r;
  r.frames = session.frame_count();
  r.attempts = result.attempts;
  r.models = store.size();
  r.p50_ms = percentile(result.attempt_ms, 50);
  r.p99_ms = percentile(result.attempt_ms, 99);
  r.max_ms = result.attempt_ms.empty()
                 ? 0.0
                 : *std::max_element(result.attempt_ms.begin(), result.attempt_ms.end());
  r.mean_ms = result.attempt_ms.empty()
                  ? 0.0
                  : std::accumulate(result.attempt_ms.begin(), result.attempt_ms.end(), 0.0) /
                        static_cast<double>(result.attempt_ms.size());
  r.within_budget = r.p99_ms <= r.budget_ms;
  return r;
}

std::string format_event_log(std::span<const RuntimeEvent> events) {
  std::ostringstream out;
  out << "frame_index,kind,guide_id,model_id,score\n";
  for (const auto& e : events) {
    out << e.frame_index << ',' << to_string(e.kind) << ',' << e.guide_id << ',' << e.model_id
        << ',' << (e.score ? detail::format_double(*e.score) : "") << '\n';
  }
  return out.str();
}

void write_event_log(const std::filesystem::path& path, std::span<const RuntimeEvent> events) {
  detail::write_file_atomic(path, format_event_log(events));
}

std::vector<RuntimeEvent> read_event_log(const std::filesystem::path& path) {
  detail::CsvReader reader(path, {"frame_index", "kind", "guide_id", "model_id", "score"});
  std::vector<RuntimeEvent> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    RuntimeEvent e;
    const auto frame = reader.int_field(f, 0);
    if (frame < 0) reader.fail("negative frame index");
    e.frame_index = static_cast<std::size_t>(frame);
    try {
      e.kind = parse_event_kind(f[1]);
    } catch (const Error&) {
      reader.fail("unknown event kind '" + f[1] + "'");
    }
    e.guide_id = f[2];
    e.model_id = f[3];
    if (!f[4].empty()) e.score = reader.double_field(f, 4);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace attnguide
