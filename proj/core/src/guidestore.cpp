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

#include "attnguide/guidestore.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "attnguide/error.hpp"
#include "text_io.hpp"

namespace attnguide {
namespace fs = std::filesystem;

namespace {

bool is_safe_id(const std::string& id) {
  if (id.empty() || id == "." || id == "..") return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

bool has_csv_breakers(const std::string& s) {
  return s.find_first_of(",\r\n") != std::string::npos;
}

void validate(const Guide& g) {
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::kInvalidArgument, "guide '" + g.guide_id + "': " + msg);
  };
  if (!is_safe_id(g.guide_id)) fail("guide_id must use [A-Za-z0-9._-]");
  if (!is_safe_id(g.model.model_id)) fail("model_id must use [A-Za-z0-9._-]");
  if (g.provenance.user_id.empty() || has_csv_breakers(g.provenance.user_id) ||
      has_csv_breakers(g.provenance.task_id) || has_csv_breakers(g.media_ref)) {
    fail("provenance and media_ref must be non-empty CSV-safe text");
  }
  if (g.model.source.snippet_id != g.snippet.snippet_id ||
      g.model.source.training_frame != g.snippet.training_frame) {
    fail("model and snippet come from different episodes");
  }
}

}  // namespace

void GuideStore::add(Guide guide) {
  validate(guide);
  if (by_guide_.contains(guide.guide_id)) {
    throw Error(ErrorCode::kDuplicateId, "guide_id '" + guide.guide_id + "' already stored");
  }
  if (by_model_.contains(guide.model.model_id)) {
    throw Error(ErrorCode::kDuplicateId, "model_id '" + guide.model.model_id + "' already stored");
  }
  by_guide_.emplace(guide.guide_id, guides_.size());
  by_model_.emplace(guide.model.model_id, guides_.size());
  guides_.push_back(std::move(guide));
}

const Guide* GuideStore::find(const std::string& guide_id) const {
  const auto it = by_guide_.find(guide_id);
  return it == by_guide_.end() ? nullptr : &guides_[it->second];
}

const Guide* GuideStore::find_by_model(const std::string& model_id) const {
  const auto it = by_model_.find(model_id);
  return it == by_model_.end() ? nullptr : &guides_[it->second];
}

std::vector<ObjectModel> GuideStore::models() const {
  std::vector<ObjectModel> out;
  out.reserve(guides_.size());
  for (const auto& g : guides_) out.push_back(g.model);
  return out;
}

GuideStore add_guide(GuideStore store, Guide guide) {
  store.add(std::move(guide));
  return store;
}

GuideStore merge_stores(const GuideStore& a, const GuideStore& b) {
  GuideStore out = a;
  std::set<std::string> guide_ids, model_ids;
  for (const auto& g : a.guides()) {
    guide_ids.insert(g.guide_id);
    model_ids.insert(g.model.model_id);
  }
  auto rekey = [](const std::set<std::string>& taken, const std::string& user,
                  const std::string& id) {
    if (!taken.contains(id)) return id;
    const std::string base = user + "." + id;
    std::string candidate = base;
    for (int k = 2; taken.contains(candidate); ++k) candidate = base + "-" + std::to_string(k);
    return candidate;
  };
  for (Guide g : b.guides()) {
    g.guide_id = rekey(guide_ids, g.provenance.user_id, g.guide_id);
    g.model.model_id = rekey(model_ids, g.provenance.user_id, g.model.model_id);
    guide_ids.insert(g.guide_id);
    model_ids.insert(g.model.model_id);
    out.add(std::move(g));
  }
  return out;
}

namespace {

const std::vector<std::string> kManifestHeader{
    "guide_id", "user_id", "task_id", "model_file", "snippet_manifest", "media_ref", "created_at"};

}  // namespace

void save_store(const GuideStore& store, const fs::path& root) {
  fs::create_directories(root);
  std::ostringstream manifest;
  for (std::size_t i = 0; i < kManifestHeader.size(); ++i) {
    manifest << (i ? "," : "") << kManifestHeader[i];
  }
  manifest << '\n';
  for (const auto& g : store.guides()) {
    const fs::path dir = root / g.guide_id;
    fs::create_directories(dir);
    write_model(dir / "model.txt", g.model);
    write_snippet_manifest(dir / "snippet.csv", std::span<const Snippet>(&g.snippet, 1));
    manifest << g.guide_id << ',' << g.provenance.user_id << ',' << g.provenance.task_id << ','
             << g.guide_id << "/model.txt," << g.guide_id << "/snippet.csv," << g.media_ref << ','
             << g.provenance.created_at << '\n';
  }
  detail::write_file_atomic(root / "guides.csv", manifest.str());
}

GuideStore load_store(const fs::path& root) {
  detail::CsvReader reader(root / "guides.csv", kManifestHeader);
  GuideStore store;
  std::vector<std::string> f;
  while (reader.next(f)) {
    Guide g;
    g.guide_id = f[0];
    g.provenance.user_id = f[1];
    g.provenance.task_id = f[2];
    g.model = read_model(root / f[3]);
    const auto snippets = read_snippet_manifest(root / f[4]);
    if (snippets.size() != 1) reader.fail("snippet manifest must hold exactly one snippet");
    g.snippet = snippets.front();
    g.media_ref = f[5];
    g.provenance.created_at = reader.int_field(f, 6);
    try {
      store.add(std::move(g));
    } catch (const Error& e) {
      reader.fail(e.what());
    }
  }
  return store;
}

GuideStore load_store_or_empty(const fs::path& root) {
  if (!fs::exists(root / "guides.csv")) return {};
  return load_store(root);
}

std::optional<GuideChoice> select_guide(std::span<const Detection> detections,
                                        const GuideStore& store) {
  std::optional<GuideChoice> best;
  Nanos best_time = 0;
  for (const auto& d : detections) {
    const Guide* g = store.find_by_model(d.model_id);
    if (!g) continue;
    const Nanos t = g->model.trained_at;
    bool take = !best;
    if (best) {
      if (d.score != best->score) {
        take = d.score > best->score;
      } else if (t != best_time) {
        take = t > best_time;
      } else {
        take = d.model_id < best->model_id;
      }
    }
    if (take) {
      best = GuideChoice{g->guide_id, d.model_id, d.score};
      best_time = t;
    }
  }
  return best;
}

}  // namespace attnguide
