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
#include <cstdint>

#include <Eigen/Core>
#include <opencv2/core.hpp>

namespace attnguide {

// Nanoseconds since session start.
using Nanos = std::int64_t;

inline constexpr int kCanonicalWidth = 640;
inline constexpr int kCanonicalHeight = 360;
inline constexpr double kNanosPerSecond = 1e9;

struct ImuSample {
  Nanos t = 0;
  Eigen::Vector3d accel = Eigen::Vector3d::Zero();  // m/s^2, gravity included
  Eigen::Vector3d gyro = Eigen::Vector3d::Zero();   // rad/s

  friend bool operator==(const ImuSample&, const ImuSample&) = default;
};

// Timing of one frame, without pixels.
struct FrameStamp {
  std::size_t index = 0;
  Nanos t = 0;

  friend bool operator==(const FrameStamp&, const FrameStamp&) = default;
};

struct Frame {
  std::size_t index = 0;
  Nanos t = 0;
  cv::Mat image;  // CV_8UC1 or CV_8UC3, kCanonicalWidth x kCanonicalHeight
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

// Integer pixel box, half-open: [x0, x1) x [y0, y1).
struct PixelBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
  cv::Rect rect() const { return {x0, y0, width(), height()}; }

  friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

}  // namespace attnguide
