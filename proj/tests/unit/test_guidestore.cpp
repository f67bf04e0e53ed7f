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

#include <algorithm>
#include <random>

#include "attnguide/error.hpp"
#include "attnguide/guidestore.hpp"
#include "temp_dir.hpp"

namespace attnguide {
namespace {

Guide make_guide(const std::string& user, const std::string& task, int k, Nanos t = 0) {
  Guide g;
  g.guide_id = user + "-" + task + "-s" + std::to_string(k);
  g.snippet.snippet_id = "s" + std::to_string(k);
  g.snippet.episode = {static_cast<std::size_t>(10 * k + 1), static_cast<std::size_t>(10 * k + 8)};
  g.snippet.training_frame = g.snippet.episode.start;
  g.snippet.media = {g.snippet.episode.start, g.snippet.episode.end + 1};
  g.snippet.duration_s = 0.25 * k;
  g.model.model_id = "m-" + g.guide_id;
  g.model.source = {user, g.snippet.snippet_id, g.snippet.training_frame};
  g.model.trained_at = t;
  g.model.scales = {1.0};
  g.model.rotations_deg = {0.0};
  for (int i = 0; i < 5 + k; ++i) {
    g.model.edgelets.push_back({static_cast<std::int16_t>(i), static_cast<std::int16_t>(2 * i),
                                static_cast<std::uint8_t>(i % 8)});
  }
  g.media_ref = "frames/" + user + "#" + std::to_string(g.snippet.media.start);
  g.provenance = {user, task, t};
  return g;
}

GuideStore store_of(const std::string& user, int tasks, int per_task) {
  GuideStore s;
  for (int t = 0; t < tasks; ++t)
    for (int k = 0; k < per_task; ++k) s.add(make_guide(user, "t" + std::to_string(t), k));
  return s;
}

TEST(Store, AddAndIndex) {
  GuideStore s;
  s = add_guide(s, make_guide("a", "t", 1));
  EXPECT_EQ(s.size(), 1u);
  ASSERT_NE(s.find("a-t-s1"), nullptr);
  EXPECT_EQ(s.find_by_model("m-a-t-s1")->guide_id, "a-t-s1");
  EXPECT_EQ(s.find("nope"), nullptr);
}

TEST(Store, ThreeExpertsTimesThreeTasks) {
  GuideStore s;
  for (const std::string u : {"e1", "e2", "e3"})
    for (const std::string t : {"espresso", "scope", "printer"}) s.add(make_guide(u, t, 0));
  EXPECT_EQ(s.size(), 9u);
  EXPECT_EQ(s.models().size(), 9u);
}

TEST(Store, DuplicatesAreRejected) {
  GuideStore s;
  s.add(make_guide("a", "t", 1));
  try {
    s.add(make_guide("a", "t", 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateId);
  }
  auto g = make_guide("b", "t", 2);
  g.model.model_id = "m-a-t-s1";
  EXPECT_THROW(s.add(g), Error);
  EXPECT_EQ(s.size(), 1u);
}

TEST(Store, MalformedGuidesAreRejected) {
  GuideStore s;
  auto g = make_guide("a", "t", 1);
  g.guide_id = "../escape";
  EXPECT_THROW(s.add(g), Error);
  g = make_guide("a", "t", 1);
  g.snippet.training_frame += 1;
  EXPECT_THROW(s.add(g), Error);
  g = make_guide("a", "t", 1);
  g.media_ref = "x,y";
  EXPECT_THROW(s.add(g), Error);
}

TEST(Store, SaveLoadRoundTrip) {
  testing::TempDir dir("store");
  auto s = store_of("alice", 2, 3);
  save_store(s, dir.path());
  EXPECT_EQ(load_store(dir.path()), s);
  const auto text = testing::read_file(dir / "guides.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "guide_id,user_id,task_id,model_file,snippet_manifest,media_ref,created_at");
  EXPECT_FALSE(std::filesystem::exists(dir / "guides.csv.tmp"));
  EXPECT_TRUE(load_store_or_empty(dir / "missing").empty());
}

TEST(Store, CorruptManifestIsReported) {
  testing::TempDir dir("store");
  save_store(store_of("a", 1, 2), dir.path());
  testing::write_file(dir / "guides.csv",
                      testing::read_file(dir / "guides.csv") + "a-t0-s0,a,t0,a-t0-s0/model.txt,a-t0-s0/snippet.csv,x,0\n");
  try {
    load_store(dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptFile);
  }
  std::filesystem::remove(dir / "a-t0-s1" / "model.txt");
  EXPECT_THROW(load_store(dir.path()), Error);
}

TEST(Merge, IdentityAndUnion) {
  const auto x = store_of("x", 1, 4);
  EXPECT_EQ(merge_stores(x, GuideStore{}), x);
  EXPECT_EQ(merge_stores(GuideStore{}, x), x);
  const auto y = store_of("y", 1, 5);
  EXPECT_EQ(merge_stores(x, y).size(), 9u);
}

TEST(Merge, SameStoreTwiceIsRekeyedNotDeduplicated) {
  testing::TempDir dir("merge");
  const auto x = store_of("x", 1, 2);
  const auto m = merge_stores(x, x);
  ASSERT_EQ(m.size(), 4u);
  EXPECT_NE(m.find("x.x-t0-s0"), nullptr);
  EXPECT_NE(m.find_by_model("x.m-x-t0-s0"), nullptr);
  const auto m3 = merge_stores(m, x);
  EXPECT_NE(m3.find("x.x-t0-s0-2"), nullptr);
  save_store(m3, dir.path());
  EXPECT_EQ(load_store(dir.path()), m3);
}

TEST(Merge, CountsAddUpAndOrderOnlyChangesIds) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<GuideStore> stores;
    for (int k = 0; k < 3; ++k) {
      stores.push_back(store_of(rng() % 2 ? "u" : "v", 1 + rng() % 2, 1 + rng() % 3));
    }
    const auto left = merge_stores(merge_stores(stores[0], stores[1]), stores[2]);
    const auto right = merge_stores(stores[0], merge_stores(stores[1], stores[2]));
    const std::size_t total = stores[0].size() + stores[1].size() + stores[2].size();
    EXPECT_EQ(left.size(), total);
    EXPECT_EQ(right.size(), total);
    auto edgelet_multiset = [](const GuideStore& s) {
      std::vector<std::size_t> v;
      for (const auto& g : s.guides()) v.push_back(g.model.edgelets.size());
      std::sort(v.begin(), v.end());
      return v;
    };
    EXPECT_EQ(edgelet_multiset(left), edgelet_multiset(right));
  }
}

TEST(Select, HighestScoreThenNewestThenId) {
  GuideStore s;
  s.add(make_guide("a", "t", 1, 100));
  s.add(make_guide("a", "t", 2, 200));
  s.add(make_guide("a", "t", 3, 200));
  std::vector<Detection> d{{"m-a-t-s1", 0.8, {}, 0}, {"m-a-t-s2", 0.9, {}, 0}};
  EXPECT_EQ(select_guide(d, s)->guide_id, "a-t-s2");
  d = {{"m-a-t-s1", 0.9, {}, 0}, {"m-a-t-s2", 0.9, {}, 0}};
  EXPECT_EQ(select_guide(d, s)->guide_id, "a-t-s2");
  d = {{"m-a-t-s3", 0.9, {}, 0}, {"m-a-t-s2", 0.9, {}, 0}};
  EXPECT_EQ(select_guide(d, s)->guide_id, "a-t-s2");
  EXPECT_FALSE(select_guide(std::vector<Detection>{}, s));
  d = {{"unknown", 1.0, {}, 0}};
  EXPECT_FALSE(select_guide(d, s));
}

TEST(Select, ArgmaxIsOrderInvariant) {
  std::mt19937 rng(12);
  GuideStore s;
  for (int k = 0; k < 8; ++k) s.add(make_guide("a", "t", k, 10 * (k % 3)));
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Detection> d;
    for (int k = 0; k < 8; ++k) {
      if (rng() % 3 == 0) continue;
      d.push_back({"m-a-t-s" + std::to_string(k), 0.7 + 0.05 * (rng() % 4), {}, 0});
    }
    const auto a = select_guide(d, s);
    std::shuffle(d.begin(), d.end(), rng);
    const auto b = select_guide(d, s);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      EXPECT_EQ(a->guide_id, b->guide_id);
      // Adding a weaker detection never changes the choice.
      d.push_back({"m-a-t-s0", a->score - 0.01, {}, 0});
      if (std::none_of(d.begin(), d.end() - 1, [](const Detection& x) { return x.model_id == "m-a-t-s0"; })) {
        EXPECT_EQ(select_guide(d, s)->guide_id, a->guide_id);
      }
    }
  }
}

}  // namespace
}  // namespace attnguide
