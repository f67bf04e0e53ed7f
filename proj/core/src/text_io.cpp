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

#include "text_io.hpp"

#include <array>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "attnguide/error.hpp"

namespace attnguide::detail {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(trim(line.substr(start)));
      break;
    }
    out.emplace_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), ptr);
}

std::int64_t parse_int(std::string_view text) {
  text = trim(text);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

CsvReader::CsvReader(const std::filesystem::path& path,
                     const std::vector<std::string>& expected_header)
    : path_(path), columns_(expected_header.size()) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingFile, path.string());
  }
  in_.open(path);
  if (!in_) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  while (std::getline(in_, line)) {
    ++line_number_;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) {
    throw Error(ErrorCode::kEmptyStream, path.string() + " has no header");
  }
  const auto header = split(line, ',');
  if (header != expected_header) {
    std::string expected;
    for (const auto& h : expected_header) expected += (expected.empty() ? "" : ",") + h;
    fail("unexpected header '" + std::string(trim(line)) + "', expected '" + expected + "'");
  }
}

bool CsvReader::next(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_number_;
    if (trim(line).empty()) continue;
    fields = split(line, ',');
    if (fields.size() != columns_) {
      fail("expected " + std::to_string(columns_) + " fields, found " +
           std::to_string(fields.size()));
    }
    return true;
  }
  return false;
}

std::int64_t CsvReader::int_field(const std::vector<std::string>& fields, std::size_t i) const {
  try {
    return parse_int(fields.at(i));
  } catch (const std::exception& e) {
    fail(e.what());
  }
}

double CsvReader::double_field(const std::vector<std::string>& fields, std::size_t i) const {
  try {
    return parse_double(fields.at(i));
  } catch (const std::exception& e) {
    fail(e.what());
  }
}

void CsvReader::fail(const std::string& message) const {
  throw Error(ErrorCode::kCorruptFile,
              path_.string() + ":" + std::to_string(line_number_) + ": " + message);
}

KeyValues read_key_values(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::kMissingFile, path.string());
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  KeyValues out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    auto view = std::string_view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kCorruptFile, path.string() + ":" + std::to_string(line_number) +
                                               ": expected 'key = value'");
    }
    out.emplace_back(std::string(trim(view.substr(0, eq))),
                     std::string(trim(view.substr(eq + 1))));
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::kMissingFile, path.string());
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace attnguide::detail
