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

// Text model format, one item per line:
//
//   attnguide-model 1
//   model_id <id>
//   user_id <id>
//   snippet_id <id>
//   training_frame <index>
//   trained_at_ns <int>
//   template_size <width> <height>
//   orientation_bins <count>
//   scales <s0> <s1> ...
//   rotations_deg <r0> <r1> ...
//   edgelets <count>
//   <x> <y> <orientation_bin>     (count lines)
//
// Identifiers must not contain whitespace.

#include <sstream>

#include "attnguide/detector.hpp"
#include "attnguide/error.hpp"
#include "text_io.hpp"

namespace attnguide {

namespace {

constexpr const char* kMagic = "attnguide-model";
constexpr int kVersion = 1;

void check_token(const std::string& id, const char* what) {
  if (id.empty() || id.find_first_of(" \t\r\n") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " '" + id + "' must be non-empty without whitespace");
  }
}

}  // namespace

std::string serialize_model(const ObjectModel& model) {
  check_token(model.model_id, "model_id");
  check_token(model.source.user_id, "user_id");
  check_token(model.source.snippet_id, "snippet_id");
  std::ostringstream out;
  out << kMagic << ' ' << kVersion << '\n'
      << "model_id " << model.model_id << '\n'
      << "user_id " << model.source.user_id << '\n'
      << "snippet_id " << model.source.snippet_id << '\n'
      << "training_frame " << model.source.training_frame << '\n'
      << "trained_at_ns " << model.trained_at << '\n'
      << "template_size " << model.template_width << ' ' << model.template_height << '\n'
      << "orientation_bins " << model.orientation_bins << '\n'
      << "scales";
  for (double s : model.scales) out << ' ' << detail::format_double(s);
  out << "\nrotations_deg";
  for (double r : model.rotations_deg) out << ' ' << detail::format_double(r);
  out << "\nedgelets " << model.edgelets.size() << '\n';
  for (const auto& e : model.edgelets) {
    out << e.x << ' ' << e.y << ' ' << static_cast<int>(e.bin) << '\n';
  }
  return out.str();
}

ObjectModel parse_model(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::size_t line_number = 0;
  std::string line;
  auto fail = [&](const std::string& msg) -> void {
    throw Error(ErrorCode::kCorruptFile, origin + ":" + std::to_string(line_number) + ": " + msg);
  };
  // Reads the next line, checks its key and returns the remaining tokens.
  auto expect = [&](const std::string& key) {
    if (!std::getline(in, line)) fail("unexpected end of file, expected '" + key + "'");
    ++line_number;
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != key) fail("expected '" + key + "', found '" + k + "'");
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    return tokens;
  };
  auto one = [&](const std::string& key) {
    auto t = expect(key);
    if (t.size() != 1) fail("'" + key + "' takes one value");
    return t.front();
  };
  auto integer = [&](const std::string& s) -> std::int64_t {
    try {
      return detail::parse_int(s);
    } catch (const std::exception& e) {
      fail(e.what());
    }
    return 0;
  };
  auto real = [&](const std::string& s) -> double {
    try {
      return detail::parse_double(s);
    } catch (const std::exception& e) {
      fail(e.what());
    }
    return 0;
  };

  if (integer(one(kMagic)) != kVersion) fail("unsupported model version");
  ObjectModel m;
  m.model_id = one("model_id");
  m.source.user_id = one("user_id");
  m.source.snippet_id = one("snippet_id");
  const auto training_frame = integer(one("training_frame"));
  if (training_frame < 0) fail("negative training frame");
  m.source.training_frame = static_cast<std::size_t>(training_frame);
  m.trained_at = integer(one("trained_at_ns"));
  const auto size = expect("template_size");
  if (size.size() != 2) fail("template_size takes width and height");
  m.template_width = static_cast<int>(integer(size[0]));
  m.template_height = static_cast<int>(integer(size[1]));
  m.orientation_bins = static_cast<int>(integer(one("orientation_bins")));
  if (m.template_width <= 0 || m.template_height <= 0) fail("template size must be positive");
  if (m.orientation_bins < 2 || m.orientation_bins > 64) fail("orientation bins out of range");
  for (const auto& s : expect("scales")) m.scales.push_back(real(s));
  for (const auto& r : expect("rotations_deg")) m.rotations_deg.push_back(real(r));
  const auto count = integer(one("edgelets"));
  if (count < 0) fail("negative edgelet count");
  m.edgelets.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) fail("missing edgelet lines");
    ++line_number;
    std::istringstream ls(line);
    std::string xs, ys, bs, extra;
    if (!(ls >> xs >> ys >> bs) || (ls >> extra)) fail("edgelet needs 'x y bin'");
    const auto x = integer(xs), y = integer(ys), b = integer(bs);
    if (x < 0 || y < 0 || x >= m.template_width || y >= m.template_height) {
      fail("edgelet outside the template");
    }
    if (b < 0 || b >= m.orientation_bins) fail("orientation bin out of range");
    m.edgelets.push_back({static_cast<std::int16_t>(x), static_cast<std::int16_t>(y),
                          static_cast<std::uint8_t>(b)});
  }
  while (std::getline(in, line)) {
    ++line_number;
    if (!detail::trim(line).empty()) fail("trailing content");
  }
  return m;
}

void write_model(const std::filesystem::path& path, const ObjectModel& model) {
  detail::write_file_atomic(path, serialize_model(model));
}

ObjectModel read_model(const std::filesystem::path& path) {
  return parse_model(detail::read_file(path), path.string());
}

}  // namespace attnguide
