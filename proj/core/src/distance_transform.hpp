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

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace attnguide::detail {

inline constexpr std::int32_t kFarSquared = std::numeric_limits<std::int32_t>::max() / 4;

// Exact squared Euclidean distance to the nearest non-zero pixel of `mask`
// (row-major, width x height), using the separable lower-envelope algorithm.
// Pixels are kFarSquared when the mask is empty.
std::vector<std::int32_t> squared_distance_transform(std::span<const std::uint8_t> mask, int width,
                                                     int height);

}  // namespace attnguide::detail
