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

#include <benchmark/benchmark.h>

#include "attnguide/detector.hpp"
#include "attnguide/synth.hpp"

namespace attnguide {
namespace {

Frame object_frame(int id, Point2 at = kSpatialAttentionPoint) {
  cv::Mat img(kCanonicalHeight, kCanonicalWidth, CV_8UC1, cv::Scalar(110));
  draw_object(img, id, at);
  return {0, 0, img};
}

std::vector<ObjectModel> models(int n) {
  std::vector<ObjectModel> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(train_model(object_frame(i), spatial_attention(), "m" + std::to_string(i), {}, 0));
  }
  return out;
}

void BM_BuildIndex(benchmark::State& state) {
  const auto frame = object_frame(3, {256.0, 184.0});
  const auto aoi = spatial_attention().aoi;
  for (auto _ : state) {
    SearchIndex index(frame, aoi, {});
    benchmark::DoNotOptimize(index.edges().edge_count());
  }
}
BENCHMARK(BM_BuildIndex)->Unit(benchmark::kMillisecond);

void BM_TrainModel(benchmark::State& state) {
  const auto frame = object_frame(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_model(frame, spatial_attention(), "m", {}, 0));
  }
}
BENCHMARK(BM_TrainModel)->Unit(benchmark::kMillisecond);

// Index construction plus matching, the per-attempt cost of assistive mode.
void BM_DetectFrame(benchmark::State& state) {
  const auto ms = models(static_cast<int>(state.range(0)));
  const auto frame = object_frame(3, {256.0, 184.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(detect(frame, spatial_attention(), ms));
  }
  state.counters["models"] = static_cast<double>(ms.size());
}
BENCHMARK(BM_DetectFrame)->Arg(1)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_BestPose(benchmark::State& state) {
  const auto ms = models(1);
  const SearchIndex index(object_frame(0, {244.0, 195.0}), spatial_attention().aoi, {});
  for (auto _ : state) benchmark::DoNotOptimize(index.best_pose(ms[0]));
}
BENCHMARK(BM_BestPose)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace attnguide
