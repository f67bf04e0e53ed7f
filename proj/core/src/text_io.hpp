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

// Small text helpers shared by the file-format readers and writers.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace attnguide::detail {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view line, char sep);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

// Line-oriented CSV reader with a mandatory header row. Errors carry the file
// name and line number.
class CsvReader {
 public:
  CsvReader(const std::filesystem::path& path, const std::vector<std::string>& expected_header);

  // Returns false at end of file. Blank lines are skipped.
  bool next(std::vector<std::string>& fields);

  std::int64_t int_field(const std::vector<std::string>& fields, std::size_t i) const;
  double double_field(const std::vector<std::string>& fields, std::size_t i) const;

  [[noreturn]] void fail(const std::string& message) const;

  std::size_t line_number() const { return line_number_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t columns_ = 0;
  std::size_t line_number_ = 0;
};

std::int64_t parse_int(std::string_view text);  // throws std::invalid_argument
double parse_double(std::string_view text);     // throws std::invalid_argument

// `key = value` lines, `#` starts a comment. Keys may repeat; order is kept.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
KeyValues read_key_values(const std::filesystem::path& path);

// Writes to a sibling temporary and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace attnguide::detail
