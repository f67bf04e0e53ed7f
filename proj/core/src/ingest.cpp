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

#include "attnguide/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#include <opencv2/videoio.hpp>

#include "attnguide/error.hpp"
#include "text_io.hpp"

namespace attnguide {
namespace fs = std::filesystem;

std::string to_string(SessionMode mode) {
  return mode == SessionMode::kTraining ? "training" : "assistive";
}

SessionMode parse_session_mode(const std::string& text) {
  if (text == "training") return SessionMode::kTraining;
  if (text == "assistive") return SessionMode::kAssistive;
  throw Error(ErrorCode::kInvalidArgument, "unknown session mode '" + text + "'");
}

namespace {

void check_frames(std::span<const FrameStamp> frames) {
  if (frames.empty()) throw Error(ErrorCode::kEmptyStream, "no frames");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].index != i) {
      throw Error(ErrorCode::kInvalidArgument,
                  "frame indices must be contiguous from 0; found " +
                      std::to_string(frames[i].index) + " at position " + std::to_string(i));
    }
    if (i > 0 && frames[i].t <= frames[i - 1].t) {
      throw Error(ErrorCode::kNonMonotonicTimestamps,
                  "frame " + std::to_string(i) + " at t=" + std::to_string(frames[i].t) +
                      " ns does not follow t=" + std::to_string(frames[i - 1].t) + " ns");
    }
  }
}

void check_imu(std::span<const ImuSample> imu) {
  if (imu.empty()) throw Error(ErrorCode::kEmptyStream, "no IMU samples");
  for (std::size_t i = 0; i < imu.size(); ++i) {
    if (!imu[i].accel.allFinite() || !imu[i].gyro.allFinite()) {
      throw Error(ErrorCode::kCorruptFile, "IMU sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && imu[i].t <= imu[i - 1].t) {
      throw Error(ErrorCode::kNonMonotonicTimestamps,
                  "IMU sample " + std::to_string(i) + " at t=" + std::to_string(imu[i].t) +
                      " ns does not follow t=" + std::to_string(imu[i - 1].t) + " ns");
    }
  }
}

}  // namespace

ImuAssignment assign_imu_to_frames(std::span<const FrameStamp> frames,
                                   std::span<const ImuSample> imu) {
  check_frames(frames);
  check_imu(imu);

  ImuAssignment out(frames.size());
  // Sample i goes to frame f where f is the first frame whose upper midpoint
  // lies at or beyond t_i. Both sequences are sorted, so a single sweep works.
  std::size_t f = 0;
  for (std::size_t i = 0; i < imu.size(); ++i) {
    const Nanos t = imu[i].t;
    while (f + 1 < frames.size()) {
      const Nanos to_current = t - frames[f].t;
      const Nanos to_next = frames[f + 1].t - t;
      // Stay on the earlier frame on exact ties.
      if (to_current <= to_next) break;
      ++f;
    }
    if (out[f].empty()) out[f].begin = i;
    out[f].end = i + 1;
  }
  // Frames that received nothing get an empty range positioned in order.
  std::size_t cursor = 0;
  for (auto& range : out) {
    if (range.empty()) {
      range.begin = range.end = cursor;
    } else {
      cursor = range.end;
    }
  }
  return out;
}

InMemoryFrameSource::InMemoryFrameSource(std::vector<cv::Mat> images)
    : images_(std::move(images)) {}

cv::Mat InMemoryFrameSource::image(std::size_t index) const { return images_.at(index); }

ImageDirectoryFrameSource::ImageDirectoryFrameSource(fs::path dir, std::size_t count)
    : dir_(std::move(dir)), count_(count) {
  for (std::size_t i = 0; i < count_; ++i) {
    if (!fs::exists(frame_path(dir_, i))) {
      throw Error(ErrorCode::kMissingFile, frame_path(dir_, i).string());
    }
  }
}

fs::path ImageDirectoryFrameSource::frame_path(const fs::path& dir, std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof(name), "frame_%06zu.png", index);
  return dir / name;
}

cv::Mat ImageDirectoryFrameSource::image(std::size_t index) const {
  const auto path = frame_path(dir_, index);
  cv::Mat img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (img.empty()) throw Error(ErrorCode::kCorruptFile, "cannot decode " + path.string());
  return img;
}

cv::Mat to_canonical(const cv::Mat& image) {
  if (image.empty()) throw Error(ErrorCode::kCorruptFile, "empty image");
  cv::Mat img = image;
  if (img.depth() != CV_8U) {
    cv::Mat converted;
    img.convertTo(converted, CV_8U);
    img = converted;
  }
  if (img.channels() == 4) {
    cv::Mat rgb;
    cv::cvtColor(img, rgb, cv::COLOR_BGRA2BGR);
    img = rgb;
  } else if (img.channels() != 1 && img.channels() != 3) {
    throw Error(ErrorCode::kCorruptFile,
                "unsupported channel count " + std::to_string(img.channels()));
  }
  if (img.cols != kCanonicalWidth || img.rows != kCanonicalHeight) {
    cv::Mat resized;
    cv::resize(img, resized, cv::Size(kCanonicalWidth, kCanonicalHeight), 0, 0, cv::INTER_AREA);
    img = resized;
  }
  return img;
}

Session::Session(std::vector<FrameStamp> frames, std::vector<ImuSample> imu, SessionMeta meta,
                 std::shared_ptr<const FrameSource> images)
    : frames_(std::move(frames)),
      imu_(std::move(imu)),
      meta_(std::move(meta)),
      images_(std::move(images)) {
  assignment_ = assign_imu_to_frames(frames_, imu_);
  if (images_ && images_->size() != frames_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "frame source holds " + std::to_string(images_->size()) + " images for " +
                    std::to_string(frames_.size()) + " frame stamps");
  }
}

std::span<const ImuSample> Session::samples_for(std::size_t frame_index) const {
  const auto& r = assignment_.at(frame_index);
  return std::span<const ImuSample>(imu_).subspan(r.begin, r.size());
}

Frame Session::frame(std::size_t index) const {
  const auto& stamp = frames_.at(index);
  if (!images_) throw Error(ErrorCode::kPrecondition, "session has no frame images");
  return Frame{stamp.index, stamp.t, to_canonical(images_->image(index))};
}

double Session::mean_frame_period_s() const {
  if (frames_.size() < 2) return 0.0;
  return static_cast<double>(frames_.back().t - frames_.front().t) /
         static_cast<double>(frames_.size() - 1) / kNanosPerSecond;
}

std::vector<ImuSample> read_imu_csv(const fs::path& path, GyroUnit unit) {
  detail::CsvReader reader(path, {"t_ns", "ax", "ay", "az", "gx", "gy", "gz"});
  const double gyro_scale = unit == GyroUnit::kDegreesPerSecond ? std::numbers::pi / 180.0 : 1.0;
  std::vector<ImuSample> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    ImuSample s;
    s.t = reader.int_field(f, 0);
    s.accel = {reader.double_field(f, 1), reader.double_field(f, 2), reader.double_field(f, 3)};
    s.gyro = Eigen::Vector3d(reader.double_field(f, 4), reader.double_field(f, 5),
                             reader.double_field(f, 6)) *
             gyro_scale;
    if (!s.accel.allFinite() || !s.gyro.allFinite()) reader.fail("non-finite value");
    if (!out.empty() && s.t <= out.back().t) {
      throw Error(ErrorCode::kNonMonotonicTimestamps,
                  path.string() + ":" + std::to_string(reader.line_number()) + ": t_ns " +
                      std::to_string(s.t) + " does not follow " + std::to_string(out.back().t));
    }
    out.push_back(s);
  }
  if (out.empty()) throw Error(ErrorCode::kEmptyStream, path.string() + " has no IMU rows");
  return out;
}

void write_imu_csv(const fs::path& path, std::span<const ImuSample> imu) {
  std::ostringstream out;
  out << "t_ns,ax,ay,az,gx,gy,gz\n";
  for (const auto& s : imu) {
    out << s.t;
    for (int k = 0; k < 3; ++k) out << ',' << detail::format_double(s.accel[k]);
    for (int k = 0; k < 3; ++k) out << ',' << detail::format_double(s.gyro[k]);
    out << '\n';
  }
  detail::write_file_atomic(path, out.str());
}

std::vector<FrameStamp> read_frame_times(const fs::path& path) {
  detail::CsvReader reader(path, {"index", "t_ns"});
  std::vector<FrameStamp> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    const auto index = reader.int_field(f, 0);
    if (index != static_cast<std::int64_t>(out.size())) {
      reader.fail("frame index " + std::to_string(index) + ", expected " +
                  std::to_string(out.size()));
    }
    FrameStamp stamp{static_cast<std::size_t>(index), reader.int_field(f, 1)};
    if (!out.empty() && stamp.t <= out.back().t) {
      throw Error(ErrorCode::kNonMonotonicTimestamps,
                  path.string() + ":" + std::to_string(reader.line_number()) + ": t_ns " +
                      std::to_string(stamp.t) + " does not follow " +
                      std::to_string(out.back().t));
    }
    out.push_back(stamp);
  }
  if (out.empty()) throw Error(ErrorCode::kEmptyStream, path.string() + " lists no frames");
  return out;
}

void write_frame_times(const fs::path& path, std::span<const FrameStamp> frames) {
  std::ostringstream out;
  out << "index,t_ns\n";
  for (const auto& f : frames) out << f.index << ',' << f.t << '\n';
  detail::write_file_atomic(path, out.str());
}

SessionMeta read_session_meta(const fs::path& path) {
  SessionMeta meta;
  bool has_user = false, has_task = false, has_mode = false;
  for (const auto& [key, value] : detail::read_key_values(path)) {
    if (key == "user_id") {
      meta.user_id = value;
      has_user = true;
    } else if (key == "task_id") {
      meta.task_id = value;
      has_task = true;
    } else if (key == "mode") {
      meta.mode = parse_session_mode(value);
      has_mode = true;
    } else if (key == "start_time_ns") {
      try {
        meta.start_time_ns = detail::parse_int(value);
      } catch (const std::exception& e) {
        throw Error(ErrorCode::kCorruptFile, path.string() + ": start_time_ns: " + e.what());
      }
    }
  }
  if (!has_user || !has_task || !has_mode) {
    throw Error(ErrorCode::kCorruptFile,
                path.string() + ": session metadata needs user_id, task_id and mode");
  }
  return meta;
}

void write_session_meta(const fs::path& path, const SessionMeta& meta) {
  std::ostringstream out;
  out << "user_id = " << meta.user_id << '\n'
      << "task_id = " << meta.task_id << '\n'
      << "mode = " << to_string(meta.mode) << '\n'
      << "start_time_ns = " << meta.start_time_ns << '\n';
  detail::write_file_atomic(path, out.str());
}

namespace {

Session load_video_session(const fs::path& video, std::vector<ImuSample> imu,
                           const SessionMeta& meta, double fps) {
  if (!(fps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "video fps must be positive");
  cv::VideoCapture cap(video.string());
  if (!cap.isOpened()) throw Error(ErrorCode::kCorruptFile, "cannot open video " + video.string());
  std::vector<cv::Mat> images;
  std::vector<FrameStamp> stamps;
  cv::Mat img;
  while (cap.read(img)) {
    const std::size_t i = images.size();
    images.push_back(to_canonical(img));
    stamps.push_back({i, static_cast<Nanos>(std::llround(static_cast<double>(i) *
                                                          kNanosPerSecond / fps))});
  }
  if (images.empty()) throw Error(ErrorCode::kEmptyStream, video.string() + " has no frames");
  return Session(std::move(stamps), std::move(imu), meta,
                 std::make_shared<InMemoryFrameSource>(std::move(images)));
}

}  // namespace

Session load_session(const fs::path& frames_path, const fs::path& imu_path,
                     const SessionMeta& meta, const LoadOptions& options) {
  if (!fs::exists(frames_path)) throw Error(ErrorCode::kMissingFile, frames_path.string());
  auto imu = read_imu_csv(imu_path, options.gyro_unit);
  if (fs::is_directory(frames_path)) {
    auto stamps = read_frame_times(frames_path / "frame_times.csv");
    auto source = std::make_shared<ImageDirectoryFrameSource>(frames_path, stamps.size());
    // Decode the first frame now so an unreadable sequence fails at load time.
    (void)to_canonical(source->image(0));
    return Session(std::move(stamps), std::move(imu), meta, std::move(source));
  }
  if (!options.video_fps) {
    throw Error(ErrorCode::kInvalidArgument,
                "video input " + frames_path.string() + " needs a declared fps");
  }
  return load_video_session(frames_path, std::move(imu), meta, *options.video_fps);
}

void write_session(const fs::path& dir, const Session& session) {
  const auto frames_dir = dir / "frames";
  fs::create_directories(frames_dir);
  if (session.has_images()) {
    for (std::size_t i = 0; i < session.frame_count(); ++i) {
      const auto path = ImageDirectoryFrameSource::frame_path(frames_dir, i);
      if (!cv::imwrite(path.string(), session.frame(i).image)) {
        throw Error(ErrorCode::kIo, "cannot write " + path.string());
      }
    }
  }
  write_frame_times(frames_dir / "frame_times.csv", session.frames());
  write_imu_csv(dir / "imu.csv", session.imu());
  write_session_meta(dir / "meta.txt", session.meta());
}

}  // namespace attnguide
