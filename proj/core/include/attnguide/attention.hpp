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

// Head-motion attention model.
//
// A frame is `attending` when both the relative head acceleration and the
// relative angular velocity stay at or below their thresholds, and
// `in_motion` otherwise. The per-frame state is then smoothed with a majority
// (median) filter and maximal attending runs become attention episodes. Where
// the wearer looks is not estimated: a fixed image point is used and a
// 200x200 area of interest (AOI) is cut around it.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "attnguide/ingest.hpp"
#include "attnguide/types.hpp"

namespace attnguide {

struct AttentionParams {
  double tau = 3.0;             // relative acceleration threshold, m/s^2
  double nu = 0.5;              // relative angular velocity threshold, rad/s
  int median_window = 5;        // frames, odd
  double gravity_alpha = 0.9;   // per-sample low-pass coefficient in [0, 1)
  int min_episode_frames = 10;  // shorter attending runs are dropped

  // Throws Error(kInvalidArgument) when out of range.
  void validate() const;
};

enum class AttentionState : std::uint8_t { kInMotion = 0, kAttending = 1 };

inline bool is_attending(AttentionState s) { return s == AttentionState::kAttending; }

struct MotionSignal {
  std::vector<double> accel;    // relative acceleration magnitude per frame
  std::vector<double> angular;  // relative angular velocity magnitude per frame

  std::size_t size() const { return accel.size(); }
};

// Inclusive frame range.
struct Episode {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start + 1; }
  friend bool operator==(const Episode&, const Episode&) = default;
};

struct AttentionTimeline {
  MotionSignal signal;
  std::vector<AttentionState> raw;
  std::vector<AttentionState> filtered;
  std::vector<Episode> episodes;  // after minimum-length pruning

  std::size_t size() const { return raw.size(); }
  // Index into `episodes`, or nullopt when the frame is not in a kept episode.
  std::optional<std::size_t> episode_of(std::size_t frame_index) const;
};

struct SpatialAttention {
  Point2 point;
  PixelBox aoi;
};

inline constexpr Point2 kSpatialAttentionPoint{250.0, 189.5};
inline constexpr int kAoiSize = 200;

// Gravity is tracked with an exponential low-pass over the whole sample stream
// (seeded with the first sample) and the relative acceleration of a sample is
// its distance from the estimate before that sample is folded in. Per frame,
// magnitudes of the assigned samples are averaged. A frame with no samples
// inherits the previous frame's values; frame 0 must own at least one sample.
MotionSignal compute_motion_signal(const Session& session, const AttentionParams& params);

std::vector<AttentionState> temporal_attention(const MotionSignal& signal,
                                               const AttentionParams& params);

// Majority vote in a centred window. Near the ends the window is truncated to
// the frames that exist, and an even split resolves to attending.
std::vector<AttentionState> median_filter_states(std::span<const AttentionState> raw, int window);

// All maximal attending runs, in order.
std::vector<Episode> attending_runs(std::span<const AttentionState> states);

// Maximal attending runs of at least `min_frames` frames.
std::vector<Episode> extract_episodes(std::span<const AttentionState> filtered,
                                      int min_frames);

AttentionTimeline compute_timeline(const Session& session, const AttentionParams& params);

// The fixed attention point and its AOI on the canonical raster.
SpatialAttention spatial_attention();

// A size x size box centred on `center`, bounds rounded half-up and clipped to
// the canonical raster.
PixelBox aoi_around(Point2 center, int size = kAoiSize);

// CSV `frame_index,a,omega,raw_state,filtered_state,episode_id`; states are
// written as `attending` / `in_motion`, episode_id is -1 outside episodes.
void write_timeline_csv(const std::filesystem::path& path, const AttentionTimeline& timeline);
AttentionTimeline read_timeline_csv(const std::filesystem::path& path);

}  // namespace attnguide
