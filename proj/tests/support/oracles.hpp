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

// Brute-force oracles and small builders shared by the unit and acceptance
// tests. Nothing here calls into the code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "attnguide/attention.hpp"
#include "attnguide/eval.hpp"
#include "attnguide/ingest.hpp"

namespace attnguide::testing {

// Majority of the centred window, clipped at the ends; ties attend.
inline std::vector<bool> oracle_median(const std::vector<bool>& raw, int window) {
  const int n = static_cast<int>(raw.size()), half = window / 2;
  std::vector<bool> out(raw.size());
  for (int i = 0; i < n; ++i) {
    int yes = 0, all = 0;
    for (int j = i - half; j <= i + half; ++j) {
      if (j < 0 || j >= n) continue;
      ++all;
      yes += raw[j] ? 1 : 0;
    }
    out[i] = 2 * yes >= all;
  }
  return out;
}

// Squared distance to the nearest set pixel by exhaustive search; -1 if none.
inline std::vector<std::int64_t> oracle_edt(const std::vector<std::uint8_t>& mask, int w, int h) {
  std::vector<std::pair<int, int>> on;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (mask[y * w + x]) on.emplace_back(x, y);
  std::vector<std::int64_t> out(mask.size(), -1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::int64_t best = -1;
      for (auto [px, py] : on) {
        const std::int64_t d = std::int64_t(px - x) * (px - x) + std::int64_t(py - y) * (py - y);
        if (best < 0 || d < best) best = d;
      }
      out[y * w + x] = best;
    }
  }
  return out;
}

// IoU of two integer boxes [x0, x1) x [y0, y1) by counting unit pixels.
inline double oracle_pixel_iou(int ax0, int ay0, int ax1, int ay1, int bx0, int by0, int bx1,
                               int by1) {
  long inter = 0, uni = 0;
  const int lx = std::min(ax0, bx0), hx = std::max(ax1, bx1);
  const int ly = std::min(ay0, by0), hy = std::max(ay1, by1);
  for (int y = ly; y < hy; ++y) {
    for (int x = lx; x < hx; ++x) {
      const bool a = x >= ax0 && x < ax1 && y >= ay0 && y < ay1;
      const bool b = x >= bx0 && x < bx1 && y >= by0 && y < by1;
      inter += a && b;
      uni += a || b;
    }
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

// Inclusive frame ranges, counted frame by frame.
inline double oracle_frame_overlap(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1,
                                   bool over_expert) {
  std::size_t inter = 0, uni = 0, expert = 0;
  for (std::size_t f = std::min(a0, b0); f <= std::max(a1, b1); ++f) {
    const bool a = f >= a0 && f <= a1, b = f >= b0 && f <= b1;
    inter += a && b;
    uni += a || b;
    expert += b;
  }
  return 100.0 * static_cast<double>(inter) / static_cast<double>(over_expert ? expert : uni);
}

struct OracleDiscovery {
  std::set<std::string> discovered;
  std::size_t declared = 0;
  std::size_t correct = 0;
  double precision = 0.0;
  double recall = 0.0;
};

// Enumerates every frame interval. An object is discovered when some window of
// `persistence` frames has that label and IoU >= threshold on every frame.
// Declared discoveries are the maximal estimate tracks of at least
// `persistence` frames, attributed to the label with the largest summed IoU.
inline OracleDiscovery oracle_discovery(const std::vector<std::optional<Box>>& est,
                                        const GroundTruth& truth, double threshold,
                                        std::size_t persistence, double size) {
  const std::size_t n = est.size();
  auto frame_iou = [&](std::size_t f) -> double {
    if (!est[f] || !truth.target[f] || truth.label[f].empty()) return 0.0;
    const Box& a = *est[f];
    const Box b{truth.target[f]->x - size / 2, truth.target[f]->y - size / 2,
                truth.target[f]->x + size / 2, truth.target[f]->y + size / 2};
    const double iw = std::max(0.0, std::min(a.x1, b.x1) - std::max(a.x0, b.x0));
    const double ih = std::max(0.0, std::min(a.y1, b.y1) - std::max(a.y0, b.y0));
    const double inter = iw * ih;
    return inter / ((a.x1 - a.x0) * (a.y1 - a.y0) + size * size - inter);
  };
  auto good = [&](std::size_t f, const std::string& obj) {
    return est[f] && truth.target[f] && truth.label[f] == obj && frame_iou(f) >= threshold;
  };
  auto has_window = [&](const std::string& obj, std::size_t lo, std::size_t hi) {
    if (hi + 1 < lo + persistence) return false;
    for (std::size_t i = lo; i + persistence - 1 <= hi; ++i) {
      bool all = true;
      for (std::size_t k = i; k < i + persistence && all; ++k) all = good(k, obj);
      if (all) return true;
    }
    return false;
  };

  std::set<std::string> objects;
  for (const auto& l : truth.label)
    if (!l.empty()) objects.insert(l);
  for (const auto& in : truth.interactions) objects.insert(in.label);

  OracleDiscovery r;
  for (const auto& o : objects)
    if (n > 0 && has_window(o, 0, n - 1)) r.discovered.insert(o);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      bool all = true;
      for (std::size_t k = i; k <= j && all; ++k) all = est[k].has_value();
      if (!all) break;
      const bool maximal = (i == 0 || !est[i - 1]) && (j + 1 == n || !est[j + 1]);
      if (!maximal || j - i + 1 < persistence) continue;
      ++r.declared;
      std::map<std::string, double> sums;
      for (std::size_t k = i; k <= j; ++k)
        if (truth.target[k] && !truth.label[k].empty()) sums[truth.label[k]] += frame_iou(k);
      std::optional<std::string> best;
      double best_sum = 0.0;
      for (const auto& [o, s] : sums) {
        if (s > best_sum) {
          best_sum = s;
          best = o;
        }
      }
      if (best && has_window(*best, i, j)) ++r.correct;
    }
  }
  r.precision = r.declared ? static_cast<double>(r.correct) / static_cast<double>(r.declared) : 0.0;
  r.recall = objects.empty() ? 0.0
                             : static_cast<double>(r.discovered.size()) /
                                   static_cast<double>(objects.size());
  return r;
}

// Session without pixels: `frames` frames at `fps`, IMU at `rate` Hz with
// samples produced by `sample(t_seconds)`.
inline Session imu_session(std::size_t frames, double fps, double rate,
                           const std::function<ImuSample(double)>& sample,
                           SessionMode mode = SessionMode::kTraining) {
  std::vector<FrameStamp> stamps;
  for (std::size_t f = 0; f < frames; ++f) {
    stamps.push_back({f, static_cast<Nanos>(std::llround(static_cast<double>(f) * 1e9 / fps))});
  }
  std::vector<ImuSample> imu;
  const double duration = static_cast<double>(frames) / fps;
  for (std::size_t i = 0; static_cast<double>(i) / rate < duration; ++i) {
    const double t = static_cast<double>(i) / rate;
    auto s = sample(t);
    s.t = static_cast<Nanos>(std::llround(t * 1e9));
    imu.push_back(s);
  }
  return Session(std::move(stamps), std::move(imu), {"u", "t", mode, 0}, nullptr);
}

inline ImuSample still_sample(double) {
  ImuSample s;
  s.accel = {0.0, 0.0, 9.81};
  return s;
}

}  // namespace attnguide::testing
