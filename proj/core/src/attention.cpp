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

#include "attnguide/attention.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "attnguide/error.hpp"
#include "text_io.hpp"

namespace attnguide {

void AttentionParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::kInvalidArgument, "tau must be positive");
  }
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw Error(ErrorCode::kInvalidArgument, "nu must be positive");
  }
  if (median_window < 1 || median_window % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "median window must be odd and >= 1");
  }
  if (!(gravity_alpha >= 0.0 && gravity_alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gravity alpha must lie in [0, 1)");
  }
  if (min_episode_frames < 1) {
    throw Error(ErrorCode::kInvalidArgument, "minimum episode length must be >= 1");
  }
}

std::optional<std::size_t> AttentionTimeline::episode_of(std::size_t frame_index) const {
  const auto it = std::partition_point(episodes.begin(), episodes.end(), [&](const Episode& e) {
    return e.end < frame_index;
  });
  if (it != episodes.end() && it->start <= frame_index) {
    return static_cast<std::size_t>(it - episodes.begin());
  }
  return std::nullopt;
}

MotionSignal compute_motion_signal(const Session& session, const AttentionParams& params) {
  params.validate();
  const auto& imu = session.imu();
  const std::size_t n = session.frame_count();
  if (session.assignment().front().empty()) {
    throw Error(ErrorCode::kPrecondition, "frame 0 has no assigned IMU samples");
  }

  // Relative acceleration per sample, computed in stream order.
  std::vector<double> relative(imu.size());
  Eigen::Vector3d gravity = imu.front().accel;
  const double alpha = params.gravity_alpha;
  for (std::size_t i = 0; i < imu.size(); ++i) {
    relative[i] = (imu[i].accel - gravity).norm();
    gravity = alpha * gravity + (1.0 - alpha) * imu[i].accel;
  }

  MotionSignal out;
  out.accel.resize(n);
  out.angular.resize(n);
  for (std::size_t f = 0; f < n; ++f) {
    const auto& range = session.assignment()[f];
    if (range.empty()) {
      out.accel[f] = out.accel[f - 1];
      out.angular[f] = out.angular[f - 1];
      continue;
    }
    double a = 0.0, w = 0.0;
    for (std::size_t i = range.begin; i < range.end; ++i) {
      a += relative[i];
      w += imu[i].gyro.norm();
    }
    out.accel[f] = a / static_cast<double>(range.size());
    out.angular[f] = w / static_cast<double>(range.size());
  }
  return out;
}

std::vector<AttentionState> temporal_attention(const MotionSignal& signal,
                                               const AttentionParams& params) {
  std::vector<AttentionState> out(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const bool still = signal.accel[i] <= params.tau && signal.angular[i] <= params.nu;
    out[i] = still ? AttentionState::kAttending : AttentionState::kInMotion;
  }
  return out;
}

std::vector<AttentionState> median_filter_states(std::span<const AttentionState> raw,
                                                 int window) {
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "median window must be odd and >= 1");
  }
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(raw.size());
  const std::ptrdiff_t half = window / 2;
  std::vector<AttentionState> out(raw.size());

  // Running count of attending frames inside [lo, hi].
  std::ptrdiff_t lo = 0, hi = -1, count = 0;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t want_lo = std::max<std::ptrdiff_t>(0, i - half);
    const std::ptrdiff_t want_hi = std::min(n - 1, i + half);
    while (hi < want_hi) count += is_attending(raw[++hi]) ? 1 : 0;
    while (lo < want_lo) count -= is_attending(raw[lo++]) ? 1 : 0;
    const std::ptrdiff_t len = hi - lo + 1;
    out[i] = 2 * count >= len ? AttentionState::kAttending : AttentionState::kInMotion;
  }
  return out;
}

std::vector<Episode> attending_runs(std::span<const AttentionState> states) {
  std::vector<Episode> runs;
  std::size_t i = 0;
  while (i < states.size()) {
    if (!is_attending(states[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < states.size() && is_attending(states[j + 1])) ++j;
    runs.push_back({i, j});
    i = j + 1;
  }
  return runs;
}

std::vector<Episode> extract_episodes(std::span<const AttentionState> filtered, int min_frames) {
  auto runs = attending_runs(filtered);
  std::erase_if(runs, [&](const Episode& e) {
    return e.length() < static_cast<std::size_t>(std::max(min_frames, 1));
  });
  return runs;
}

AttentionTimeline compute_timeline(const Session& session, const AttentionParams& params) {
  AttentionTimeline tl;
  tl.signal = compute_motion_signal(session, params);
  tl.raw = temporal_attention(tl.signal, params);
  tl.filtered = median_filter_states(tl.raw, params.median_window);
  tl.episodes = extract_episodes(tl.filtered, params.min_episode_frames);
  return tl;
}

PixelBox aoi_around(Point2 center, int size) {
  const double half = size / 2.0;
  // Round half up so that 89.5 maps to 90.
  PixelBox box{static_cast<int>(std::floor(center.x - half + 0.5)),
               static_cast<int>(std::floor(center.y - half + 0.5)), 0, 0};
  box.x1 = box.x0 + size;
  box.y1 = box.y0 + size;
  box.x0 = std::clamp(box.x0, 0, kCanonicalWidth);
  box.y0 = std::clamp(box.y0, 0, kCanonicalHeight);
  box.x1 = std::clamp(box.x1, 0, kCanonicalWidth);
  box.y1 = std::clamp(box.y1, 0, kCanonicalHeight);
  return box;
}

SpatialAttention spatial_attention() {
  return {kSpatialAttentionPoint, aoi_around(kSpatialAttentionPoint, kAoiSize)};
}

namespace {

const char* state_name(AttentionState s) {
  return is_attending(s) ? "attending" : "in_motion";
}

AttentionState parse_state(const detail::CsvReader& reader, const std::string& text) {
  if (text == "attending") return AttentionState::kAttending;
  if (text == "in_motion") return AttentionState::kInMotion;
  reader.fail("unknown attention state '" + text + "'");
}

}  // namespace

void write_timeline_csv(const std::filesystem::path& path, const AttentionTimeline& tl) {
  std::ostringstream out;
  out << "frame_index,a,omega,raw_state,filtered_state,episode_id\n";
  for (std::size_t i = 0; i < tl.size(); ++i) {
    const auto ep = tl.episode_of(i);
    out << i << ',' << detail::format_double(tl.signal.accel[i]) << ','
        << detail::format_double(tl.signal.angular[i]) << ',' << state_name(tl.raw[i]) << ','
        << state_name(tl.filtered[i]) << ','
        << (ep ? static_cast<long long>(*ep) : -1LL) << '\n';
  }
  detail::write_file_atomic(path, out.str());
}

AttentionTimeline read_timeline_csv(const std::filesystem::path& path) {
  detail::CsvReader reader(
      path, {"frame_index", "a", "omega", "raw_state", "filtered_state", "episode_id"});
  AttentionTimeline tl;
  std::vector<std::string> f;
  std::vector<long long> episode_ids;
  while (reader.next(f)) {
    if (reader.int_field(f, 0) != static_cast<std::int64_t>(tl.raw.size())) {
      reader.fail("frame_index out of sequence");
    }
    tl.signal.accel.push_back(reader.double_field(f, 1));
    tl.signal.angular.push_back(reader.double_field(f, 2));
    tl.raw.push_back(parse_state(reader, f[3]));
    tl.filtered.push_back(parse_state(reader, f[4]));
    episode_ids.push_back(reader.int_field(f, 5));
  }
  if (tl.raw.empty()) throw Error(ErrorCode::kEmptyStream, path.string() + " has no rows");
  // Episodes are the runs of equal non-negative ids.
  for (std::size_t i = 0; i < episode_ids.size(); ++i) {
    if (episode_ids[i] < 0) continue;
    if (!tl.episodes.empty() && i > 0 && episode_ids[i - 1] == episode_ids[i]) {
      tl.episodes.back().end = i;
    } else {
      tl.episodes.push_back({i, i});
    }
  }
  return tl;
}

}  // namespace attnguide
