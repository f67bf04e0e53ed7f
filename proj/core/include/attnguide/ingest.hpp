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

// Loading and time alignment of egocentric frame sequences and head-worn IMU
// streams.
//
// File formats:
//   IMU CSV        header `t_ns,ax,ay,az,gx,gy,gz`, SI units (m/s^2, rad/s).
//   Frame times    header `index,t_ns`, sidecar of a `frame_%06d.png` directory.
//   Session meta   `key = value` text with user_id, task_id, mode and the
//                  optional start_time_ns.

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "attnguide/types.hpp"

namespace attnguide {

enum class SessionMode { kTraining, kAssistive };

std::string to_string(SessionMode mode);
SessionMode parse_session_mode(const std::string& text);

struct SessionMeta {
  std::string user_id;
  std::string task_id;
  SessionMode mode = SessionMode::kTraining;
  // Absolute start of the recording; frame times are relative to it.
  Nanos start_time_ns = 0;

  friend bool operator==(const SessionMeta&, const SessionMeta&) = default;
};

// Contiguous run [begin, end) of IMU sample indices.
struct SampleRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return end == begin; }

  friend bool operator==(const SampleRange&, const SampleRange&) = default;
};

// One entry per frame. Because both streams are sorted, the samples nearest to
// a frame always form a contiguous run.
using ImuAssignment = std::vector<SampleRange>;

// Assigns each sample to the frame with the nearest timestamp. Exact ties go
// to the earlier frame; samples outside the frame span clamp to the first or
// last frame. Both inputs must be non-empty and strictly increasing.
ImuAssignment assign_imu_to_frames(std::span<const FrameStamp> frames,
                                   std::span<const ImuSample> imu);

// Provides pixels for a frame index. Implementations must be safe to call
// concurrently.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::size_t size() const = 0;
  virtual cv::Mat image(std::size_t index) const = 0;
};

class InMemoryFrameSource final : public FrameSource {
 public:
  explicit InMemoryFrameSource(std::vector<cv::Mat> images);
  std::size_t size() const override { return images_.size(); }
  cv::Mat image(std::size_t index) const override;

 private:
  std::vector<cv::Mat> images_;
};

// Lazily decodes `frame_%06d.png` files. All files are checked for existence
// up front; decoding errors surface on access.
class ImageDirectoryFrameSource final : public FrameSource {
 public:
  ImageDirectoryFrameSource(std::filesystem::path dir, std::size_t count);
  std::size_t size() const override { return count_; }
  cv::Mat image(std::size_t index) const override;

  static std::filesystem::path frame_path(const std::filesystem::path& dir, std::size_t index);

 private:
  std::filesystem::path dir_;
  std::size_t count_;
};

// Resizes to the canonical raster if needed. Keeps 1 or 3 channels.
cv::Mat to_canonical(const cv::Mat& image);

// Immutable after construction; safe to share across threads.
class Session {
 public:
  Session(std::vector<FrameStamp> frames, std::vector<ImuSample> imu, SessionMeta meta,
          std::shared_ptr<const FrameSource> images);

  std::size_t frame_count() const { return frames_.size(); }
  const std::vector<FrameStamp>& frames() const { return frames_; }
  const std::vector<ImuSample>& imu() const { return imu_; }
  const ImuAssignment& assignment() const { return assignment_; }
  const SessionMeta& meta() const { return meta_; }
  std::span<const ImuSample> samples_for(std::size_t frame_index) const;

  // Frame with pixels at the canonical resolution.
  Frame frame(std::size_t index) const;
  bool has_images() const { return images_ != nullptr; }

  double mean_frame_period_s() const;

 private:
  std::vector<FrameStamp> frames_;
  std::vector<ImuSample> imu_;
  SessionMeta meta_;
  std::shared_ptr<const FrameSource> images_;
  ImuAssignment assignment_;
};

enum class GyroUnit { kRadiansPerSecond, kDegreesPerSecond };

std::vector<ImuSample> read_imu_csv(const std::filesystem::path& path,
                                    GyroUnit unit = GyroUnit::kRadiansPerSecond);
void write_imu_csv(const std::filesystem::path& path, std::span<const ImuSample> imu);

std::vector<FrameStamp> read_frame_times(const std::filesystem::path& path);
void write_frame_times(const std::filesystem::path& path, std::span<const FrameStamp> frames);

SessionMeta read_session_meta(const std::filesystem::path& path);
void write_session_meta(const std::filesystem::path& path, const SessionMeta& meta);

struct LoadOptions {
  GyroUnit gyro_unit = GyroUnit::kRadiansPerSecond;
  // Required when frames_path is a video file.
  std::optional<double> video_fps;
};

// frames_path is either a directory holding frame_%06d.png + frame_times.csv,
// or a video file decoded at the declared constant fps.
Session load_session(const std::filesystem::path& frames_path,
                     const std::filesystem::path& imu_path, const SessionMeta& meta,
                     const LoadOptions& options = {});

// Writes frames as PNG + frame_times.csv, IMU CSV and meta into `dir`.
void write_session(const std::filesystem::path& dir, const Session& session);

}  // namespace attnguide
