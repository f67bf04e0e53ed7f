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

#include "attnguide/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <opencv2/imgproc.hpp>

#include "attnguide/error.hpp"
#include "distance_transform.hpp"

namespace attnguide {

std::size_t EdgeMap::edge_count() const {
  return static_cast<std::size_t>(std::count_if(bin.begin(), bin.end(),
                                                [](std::uint8_t b) { return b != kNoEdge; }));
}

int quantize_orientation(double angle_rad, int bins) {
  const double step = std::numbers::pi / bins;
  double a = std::fmod(angle_rad, std::numbers::pi);
  if (a < 0) a += std::numbers::pi;
  int b = static_cast<int>(std::floor(a / step + 0.5));
  return b % bins;
}

cv::Mat to_gray(const cv::Mat& image) {
  if (image.type() == CV_8UC1) return image;
  cv::Mat gray;
  if (image.channels() == 3) {
    cv::cvtColor(image, gray, cv::COLOR_BGR2GRAY);
  } else if (image.channels() == 4) {
    cv::cvtColor(image, gray, cv::COLOR_BGRA2GRAY);
  } else {
    image.convertTo(gray, CV_8U);
  }
  return gray;
}

EdgeMap extract_edges(const cv::Mat& gray_in, const EdgeParams& params) {
  const cv::Mat gray = to_gray(gray_in);
  const int w = gray.cols, h = gray.rows;
  EdgeMap out;
  out.width = w;
  out.height = h;
  out.bin.assign(static_cast<std::size_t>(w) * h, kNoEdge);
  out.magnitude.assign(static_cast<std::size_t>(w) * h, 0.0f);
  if (w < 3 || h < 3) return out;

  auto clampx = [w](int x) { return std::clamp(x, 0, w - 1); };
  auto clampy = [h](int y) { return std::clamp(y, 0, h - 1); };

  // 3x3 box smoothing, replicated border.
  std::vector<float> smooth(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int sum = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        const auto* row = gray.ptr<std::uint8_t>(clampy(y + dy));
        for (int dx = -1; dx <= 1; ++dx) sum += row[clampx(x + dx)];
      }
      smooth[static_cast<std::size_t>(y) * w + x] = static_cast<float>(sum) / 9.0f;
    }
  }
  auto s = [&](int x, int y) { return smooth[static_cast<std::size_t>(clampy(y)) * w + clampx(x)]; };

  // Sobel / 8: intensity change per pixel.
  std::vector<float> gx(smooth.size()), gy(smooth.size()), mag(smooth.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float dx = (s(x + 1, y - 1) + 2 * s(x + 1, y) + s(x + 1, y + 1)) -
                       (s(x - 1, y - 1) + 2 * s(x - 1, y) + s(x - 1, y + 1));
      const float dy = (s(x - 1, y + 1) + 2 * s(x, y + 1) + s(x + 1, y + 1)) -
                       (s(x - 1, y - 1) + 2 * s(x, y - 1) + s(x + 1, y - 1));
      const auto i = static_cast<std::size_t>(y) * w + x;
      gx[i] = dx / 8.0f;
      gy[i] = dy / 8.0f;
      mag[i] = std::hypot(gx[i], gy[i]);
    }
  }
  auto m = [&](int x, int y) -> float {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0.0f;
    return mag[static_cast<std::size_t>(y) * w + x];
  };

  const auto threshold = static_cast<float>(params.gradient_threshold);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto i = static_cast<std::size_t>(y) * w + x;
      const float here = mag[i];
      if (here < threshold) continue;
      // Neighbour step along the gradient, one of four sectors.
      double theta = std::atan2(gy[i], gx[i]);
      if (theta < 0) theta += std::numbers::pi;
      const int sector = static_cast<int>(std::floor(theta / (std::numbers::pi / 4) + 0.5)) % 4;
      static constexpr int kStep[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
      const int sx = kStep[sector][0], sy = kStep[sector][1];
      // Strict on one side, non-strict on the other: a two-pixel plateau keeps
      // exactly one pixel.
      if (!(here > m(x - sx, y - sy) && here >= m(x + sx, y + sy))) continue;
      const double edge_angle = std::atan2(gy[i], gx[i]) + std::numbers::pi / 2;
      out.bin[i] = static_cast<std::uint8_t>(quantize_orientation(edge_angle, params.orientation_bins));
      out.magnitude[i] = here;
    }
  }
  return out;
}

namespace detail {

namespace {

// Lower envelope of parabolas for one row/column; f holds squared distances.
void transform_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& d,
                  std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] >= kFarSquared) continue;
    while (k >= 0) {
      const double s =
          ((static_cast<double>(f[q]) + static_cast<double>(q) * q) -
           (static_cast<double>(f[v[k]]) + static_cast<double>(v[k]) * v[k])) /
          (2.0 * (q - v[k]));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -std::numeric_limits<double>::infinity()
                  : ((static_cast<double>(f[q]) + static_cast<double>(q) * q) -
                     (static_cast<double>(f[v[k - 1]]) +
                      static_cast<double>(v[k - 1]) * v[k - 1])) /
                        (2.0 * (q - v[k - 1]));
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), kFarSquared);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const std::int64_t dq = q - v[j];
    d[q] = std::min<std::int64_t>(kFarSquared, dq * dq + f[v[j]]);
  }
}

}  // namespace

std::vector<std::int32_t> squared_distance_transform(std::span<const std::uint8_t> mask, int width,
                                                     int height) {
  std::vector<std::int32_t> out(static_cast<std::size_t>(width) * height, kFarSquared);
  if (width <= 0 || height <= 0) return out;
  const int n = std::max(width, height);
  std::vector<std::int64_t> f, d;
  std::vector<int> v(n);
  std::vector<double> z(n + 1);

  // Columns first, then rows.
  std::vector<std::int64_t> cols(out.size());
  f.resize(height);
  d.resize(height);
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) {
      f[y] = mask[static_cast<std::size_t>(y) * width + x] ? 0 : kFarSquared;
    }
    transform_1d(f, d, v, z);
    for (int y = 0; y < height; ++y) cols[static_cast<std::size_t>(y) * width + x] = d[y];
  }
  f.resize(width);
  d.resize(width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) f[x] = cols[static_cast<std::size_t>(y) * width + x];
    transform_1d(f, d, v, z);
    for (int x = 0; x < width; ++x) {
      out[static_cast<std::size_t>(y) * width + x] = static_cast<std::int32_t>(d[x]);
    }
  }
  return out;
}

}  // namespace detail
}  // namespace attnguide
