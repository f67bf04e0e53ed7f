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

// Persistent, mergeable collection of video guides.
//
// On disk a store is a directory with a root manifest `guides.csv`
// (`guide_id,user_id,task_id,model_file,snippet_manifest,media_ref,created_at`)
// and one sub-directory per guide holding `model.txt` and `snippet.csv`.
// The manifest is always replaced atomically, after the guide files exist.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "attnguide/detector.hpp"
#include "attnguide/snippets.hpp"

namespace attnguide {

struct Provenance {
  std::string user_id;
  std::string task_id;
  Nanos created_at = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Guide {
  std::string guide_id;
  ObjectModel model;
  Snippet snippet;
  std::string media_ref;  // where the snippet's frames live, e.g. frames:<dir>#120-245
  Provenance provenance;

  friend bool operator==(const Guide&, const Guide&) = default;
};

class GuideStore {
 public:
  // Throws Error(kDuplicateId) for a known guide_id or model_id and
  // Error(kInvalidArgument) for malformed guides.
  void add(Guide guide);

  const std::vector<Guide>& guides() const { return guides_; }
  std::size_t size() const { return guides_.size(); }
  bool empty() const { return guides_.empty(); }

  const Guide* find(const std::string& guide_id) const;
  const Guide* find_by_model(const std::string& model_id) const;

  std::vector<ObjectModel> models() const;

  friend bool operator==(const GuideStore& a, const GuideStore& b) { return a.guides_ == b.guides_; }

 private:
  std::vector<Guide> guides_;
  std::map<std::string, std::size_t> by_guide_;
  std::map<std::string, std::size_t> by_model_;
};

GuideStore add_guide(GuideStore store, Guide guide);

// Union of both stores. Guides of `b` whose guide or model id is already taken
// are re-keyed as `<user_id>.<id>` (then `<user_id>.<id>-2`, ...). Nothing is
// deduplicated.
GuideStore merge_stores(const GuideStore& a, const GuideStore& b);

void save_store(const GuideStore& store, const std::filesystem::path& root);
GuideStore load_store(const std::filesystem::path& root);
// Empty store when `root` has no manifest yet.
GuideStore load_store_or_empty(const std::filesystem::path& root);

struct GuideChoice {
  std::string guide_id;
  std::string model_id;
  double score = 0.0;
};

// Guide owning the highest-scoring detection; ties go to the most recently
// trained model, then to the lowest model_id. Detections of unknown models are
// ignored.
std::optional<GuideChoice> select_guide(std::span<const Detection> detections,
                                        const GuideStore& store);

}  // namespace attnguide
