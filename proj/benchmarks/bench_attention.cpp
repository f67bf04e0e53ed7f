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

#include "attnguide/attention.hpp"
#include "attnguide/synth.hpp"

namespace attnguide {
namespace {

// A synthetic session of state.range(0) seconds, frames never decoded.
Session session_of(double seconds) {
  RandomScenarioOptions o;
  o.duration_s = seconds;
  o.episodes = static_cast<int>(seconds / 8.0);
  o.noise_fraction = 0.1;
  return generate(random_scenario(7, o)).session;
}

void BM_Timeline(benchmark::State& state) {
  const auto session = session_of(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_timeline(session, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(session.frame_count()));
}
BENCHMARK(BM_Timeline)->Arg(60)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_MedianFilter(benchmark::State& state) {
  std::vector<AttentionState> raw(static_cast<std::size_t>(state.range(0)));
  std::uint64_t x = 1;
  for (auto& s : raw) {
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    s = (x >> 62) ? AttentionState::kAttending : AttentionState::kInMotion;
  }
  for (auto _ : state) benchmark::DoNotOptimize(median_filter_states(raw, 5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MedianFilter)->Arg(18000);

void BM_Assignment(benchmark::State& state) {
  const auto session = session_of(600.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assign_imu_to_frames(session.frames(), session.imu()));
  }
}
BENCHMARK(BM_Assignment)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace attnguide

BENCHMARK_MAIN();
