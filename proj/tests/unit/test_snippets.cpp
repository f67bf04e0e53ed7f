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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "attnguide/error.hpp"
#include "attnguide/snippets.hpp"
#include "temp_dir.hpp"

namespace attnguide {
namespace {

std::vector<FrameStamp> stamps(std::size_t n, double fps = 30.0) {
  std::vector<FrameStamp> out;
  for (std::size_t f = 0; f < n; ++f) out.push_back({f, std::llround(f * 1e9 / fps)});
  return out;
}

TEST(Cut, NoPaddingKeepsEpisode) {
  const auto fr = stamps(200);
  const std::vector<Episode> eps{{30, 120}};
  const auto s = cut_snippets(fr, eps);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].media, (FrameRange{30, 120}));
  EXPECT_EQ(s[0].training_frame, 30u);
  EXPECT_EQ(s[0].snippet_id, "s000");
  EXPECT_NEAR(s[0].duration_s, 3.0, 1e-9);
}

TEST(Cut, PaddingIsClippedToTheSession) {
  const auto fr = stamps(15);
  const std::vector<Episode> eps{{2, 10}};
  const auto s = cut_snippets(fr, eps, {5, 9});
  EXPECT_EQ(s[0].media, (FrameRange{0, 14}));
  EXPECT_EQ(s[0].training_frame, 2u);
}

TEST(Cut, OverlappingPaddingSplitsAtTheMidpoint) {
  const auto fr = stamps(60);
  const std::vector<Episode> eps{{10, 20}, {24, 40}};
  const auto s = cut_snippets(fr, eps, {5, 5});
  // Padded ranges [5, 25] and [19, 45]; the boundary sits halfway between
  // frames 20 and 24.
  const std::size_t mid = (20 + 24) / 2;
  EXPECT_EQ(s[0].media, (FrameRange{5, mid}));
  EXPECT_EQ(s[1].media, (FrameRange{mid + 1, 45}));
  EXPECT_EQ(s[1].training_frame, 24u);
}

TEST(Cut, PropertiesOnRandomEpisodes) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 50 + rng() % 400;
    const auto fr = stamps(n);
    std::vector<Episode> eps;
    std::size_t f = rng() % 5;
    while (true) {
      const std::size_t len = 1 + rng() % 30;
      if (f + len >= n) break;
      eps.push_back({f, f + len - 1});
      f += len + 1 + rng() % 10;
    }
    const SnippetOptions o{static_cast<int>(rng() % 12), static_cast<int>(rng() % 12)};
    const auto s = cut_snippets(fr, eps, o);
    ASSERT_EQ(s.size(), eps.size());
    std::size_t total = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      EXPECT_EQ(s[k].training_frame, eps[k].start);
      EXPECT_LE(s[k].media.start, s[k].episode.start);
      EXPECT_GE(s[k].media.end, s[k].episode.end);
      if (k > 0) {
        EXPECT_LT(s[k - 1].media.end, s[k].media.start);
        EXPECT_FALSE(s[k].training_frame >= s[k - 1].episode.start &&
                     s[k].training_frame <= s[k - 1].episode.end);
      }
      const double span = static_cast<double>(s[k].media.end - s[k].media.start) / 30.0;
      EXPECT_NEAR(s[k].duration_s, span, 1.0 / 30.0);
      total += s[k].media.length();
    }
    EXPECT_LE(total, n);
  }
}

TEST(Cut, RejectsNegativeRollAndBadEpisodes) {
  const auto fr = stamps(20);
  const std::vector<Episode> ok{{2, 5}};
  EXPECT_THROW(cut_snippets(fr, ok, {-1, 0}), Error);
  const std::vector<Episode> outside{{2, 25}};
  EXPECT_THROW(cut_snippets(fr, outside), Error);
}

TEST(Stats, SingletonAndPair) {
  const std::vector<double> one{16.3};
  EXPECT_EQ(length_stats(one).mean, 16.3);
  EXPECT_EQ(length_stats(one).sd, 0.0);
  const std::vector<double> two{10.0, 20.0};
  EXPECT_EQ(length_stats(two).mean, 15.0);
  EXPECT_NEAR(length_stats(two).sd, std::sqrt(50.0), 1e-12);
  EXPECT_THROW(length_stats(std::vector<double>{}), Error);
}

TEST(Stats, RecoversGeneratorParameters) {
  // Snippets of 16.3 s +- 3.24 s on average, cut from one long 30 fps session.
  std::mt19937_64 rng(16);
  std::normal_distribution<double> len(16.3, 3.24);
  std::vector<Episode> eps;
  std::size_t f = 10;
  for (int k = 0; k < 400; ++k) {
    const auto frames = static_cast<std::size_t>(std::llround(std::max(1.0, len(rng)) * 30.0));
    eps.push_back({f, f + frames});
    f += frames + 31;
  }
  const auto s = cut_snippets(stamps(f + 1), eps);
  const auto st = snippet_length_stats(s);
  EXPECT_NEAR(st.mean, 16.3, 3.0 * 3.24 / std::sqrt(400.0));
  EXPECT_NEAR(st.sd, 3.24, 0.4);
}

TEST(Manifest, RoundTrip) {
  testing::TempDir dir("snip");
  const std::vector<Episode> eps{{10, 20}, {24, 40}};
  const auto s = cut_snippets(stamps(60), eps, {5, 5});
  write_snippet_manifest(dir / "s.csv", s);
  EXPECT_EQ(read_snippet_manifest(dir / "s.csv"), s);
  const auto text = testing::read_file(dir / "s.csv");
  EXPECT_EQ(text.rfind("snippet_id,start,end,training_frame,duration_s", 0), 0u);
}

}  // namespace
}  // namespace attnguide
