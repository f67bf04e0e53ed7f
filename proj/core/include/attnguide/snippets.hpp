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

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "attnguide/attention.hpp"
#include "attnguide/ingest.hpp"

namespace attnguide {

// Inclusive frame range of the media shown as a guide.
struct FrameRange {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start + 1; }
  friend bool operator==(const FrameRange&, const FrameRange&) = default;
};

struct Snippet {
  std::string snippet_id;
  Episode episode;
  std::size_t training_frame = 0;  // always episode.start: the untouched view
  FrameRange media;
  double duration_s = 0.0;         // t(media.end) - t(media.start)

  friend bool operator==(const Snippet&, const Snippet&) = default;
};

struct SnippetOptions {
  int pre_roll_frames = 0;
  int post_roll_frames = 0;
};

// One snippet per timeline episode. Padded media ranges are clipped to the
// session and, where two would overlap, split at the midpoint between the
// episodes: the earlier one ends at floor((end_a + start_b) / 2) and the later
// one starts on the next frame.
std::vector<Snippet> cut_snippets(const Session& session, const AttentionTimeline& timeline,
                                  const SnippetOptions& options = {});

// Same cut using only frame timestamps.
std::vector<Snippet> cut_snippets(std::span<const FrameStamp> frames,
                                  std::span<const Episode> episodes,
                                  const SnippetOptions& options = {});

struct LengthStats {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single value
  std::size_t count = 0;
};

LengthStats length_stats(std::span<const double> values);
LengthStats snippet_length_stats(std::span<const Snippet> snippets);

// CSV rows `snippet_id,start,end,training_frame,duration_s`. start/end are the
// media range; the episode is stored in the trailing episode_start/episode_end
// columns.
void write_snippet_manifest(const std::filesystem::path& path, std::span<const Snippet> snippets);
std::vector<Snippet> read_snippet_manifest(const std::filesystem::path& path);

}  // namespace attnguide
