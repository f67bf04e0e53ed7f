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

#include "attnguide/snippets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "attnguide/error.hpp"
#include "text_io.hpp"

namespace attnguide {

std::vector<Snippet> cut_snippets(const Session& session, const AttentionTimeline& timeline,
                                  const SnippetOptions& options) {
  if (timeline.size() != session.frame_count()) {
    throw Error(ErrorCode::kPrecondition, "timeline length does not match the session");
  }
  return cut_snippets(session.frames(), timeline.episodes, options);
}

std::vector<Snippet> cut_snippets(std::span<const FrameStamp> frames,
                                  std::span<const Episode> episodes,
                                  const SnippetOptions& options) {
  if (options.pre_roll_frames < 0 || options.post_roll_frames < 0) {
    throw Error(ErrorCode::kInvalidArgument, "pre/post roll must be non-negative");
  }
  const auto n = static_cast<std::ptrdiff_t>(frames.size());
  std::vector<Snippet> out;
  out.reserve(episodes.size());
  for (std::size_t k = 0; k < episodes.size(); ++k) {
    const auto& ep = episodes[k];
    if (ep.end >= frames.size() || ep.start > ep.end) {
      throw Error(ErrorCode::kPrecondition, "episode outside the session");
    }
    if (k > 0 && ep.start <= episodes[k - 1].end) {
      throw Error(ErrorCode::kPrecondition, "episodes must be ordered and disjoint");
    }
    Snippet s;
    char id[32];
    std::snprintf(id, sizeof(id), "s%03zu", k);
    s.snippet_id = id;
    s.episode = ep;
    s.training_frame = ep.start;
    const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(ep.start) -
                                                    options.pre_roll_frames);
    const auto hi = std::min<std::ptrdiff_t>(n - 1, static_cast<std::ptrdiff_t>(ep.end) +
                                                        options.post_roll_frames);
    s.media = {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
    out.push_back(s);
  }
  for (std::size_t k = 1; k < out.size(); ++k) {
    auto& prev = out[k - 1];
    auto& next = out[k];
    if (prev.media.end >= next.media.start) {
      const std::size_t split = (prev.episode.end + next.episode.start) / 2;
      prev.media.end = split;
      next.media.start = split + 1;
    }
  }
  for (auto& s : out) {
    s.duration_s =
        static_cast<double>(frames[s.media.end].t - frames[s.media.start].t) / kNanosPerSecond;
  }
  return out;
}

LengthStats length_stats(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kPrecondition, "no values");
  LengthStats st;
  st.count = values.size();
  st.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(st.count);
  if (st.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - st.mean) * (v - st.mean);
    st.sd = std::sqrt(ss / static_cast<double>(st.count - 1));
  }
  return st;
}

LengthStats snippet_length_stats(std::span<const Snippet> snippets) {
  if (snippets.empty()) throw Error(ErrorCode::kPrecondition, "no snippets");
  std::vector<double> d;
  d.reserve(snippets.size());
  for (const auto& s : snippets) d.push_back(s.duration_s);
  return length_stats(d);
}

void write_snippet_manifest(const std::filesystem::path& path, std::span<const Snippet> snippets) {
  std::ostringstream out;
  out << "snippet_id,start,end,training_frame,duration_s,episode_start,episode_end\n";
  for (const auto& s : snippets) {
    out << s.snippet_id << ',' << s.media.start << ',' << s.media.end << ',' << s.training_frame
        << ',' << detail::format_double(s.duration_s) << ',' << s.episode.start << ','
        << s.episode.end << '\n';
  }
  detail::write_file_atomic(path, out.str());
}

std::vector<Snippet> read_snippet_manifest(const std::filesystem::path& path) {
  detail::CsvReader reader(path, {"snippet_id", "start", "end", "training_frame", "duration_s",
                                  "episode_start", "episode_end"});
  std::vector<Snippet> out;
  std::vector<std::string> f;
  auto index = [&](std::size_t i) {
    const auto v = reader.int_field(f, i);
    if (v < 0) reader.fail("negative frame index");
    return static_cast<std::size_t>(v);
  };
  while (reader.next(f)) {
    Snippet s;
    s.snippet_id = f[0];
    s.media = {index(1), index(2)};
    s.training_frame = index(3);
    s.duration_s = reader.double_field(f, 4);
    s.episode = {index(5), index(6)};
    if (s.training_frame != s.episode.start) reader.fail("training frame must start the episode");
    out.push_back(s);
  }
  return out;
}

}  // namespace attnguide
