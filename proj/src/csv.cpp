// Copyright 2026 The solartwin Authors. All Rights Reserved.
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

#include "solartwin/csv.hpp"

#include <charconv>
#include <istream>

#include <fmt/format.h>

#include "solartwin/error.hpp"

namespace solartwin::csv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

}  // namespace

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

std::optional<std::int64_t> parse_integer(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string format_number(double value) { return fmt::format("{}", value); }

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError(fmt::format("cannot open {}", path.string()));
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestError(fmt::format("cannot write {}", path.string()));
  return out;
}

Reader::Reader(std::istream& in, std::string_view source) : in_(in), source_(source) {
  std::string line;
  while (std::getline(in_, line)) {
    if (!trim(line).empty()) {
      header_ = split(line);
      return;
    }
  }
  throw IngestError(fmt::format("{}: empty file, expected a header row", source_));
}

std::optional<std::size_t> Reader::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  return std::nullopt;
}

std::size_t Reader::require(std::string_view name) const {
  if (auto c = column(name)) return *c;
  throw IngestError(fmt::format("{}: missing column {}", source_, name));
}

bool Reader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    if (trim(line).empty()) continue;
    ++row_number_;
    fields_ = split(line);
    if (fields_.size() != header_.size())
      throw IngestError(fmt::format("{} row {}: expected {} fields, found {}", source_, row_number_,
                                    header_.size(), fields_.size()));
    return true;
  }
  return false;
}

std::string Reader::where(std::size_t column) const {
  return fmt::format("{} row {} column {}", source_, row_number_, header_.at(column));
}

std::int64_t Reader::integer(std::size_t column) const {
  if (auto v = parse_integer(fields_.at(column))) return *v;
  throw IngestError(fmt::format("{}: non-numeric value '{}'", where(column), fields_.at(column)));
}

double Reader::number(std::size_t column) const {
  if (auto v = parse_number(fields_.at(column))) return *v;
  throw IngestError(fmt::format("{}: non-numeric value '{}'", where(column), fields_.at(column)));
}

std::optional<std::int64_t> Reader::optional_integer(std::size_t column) const {
  if (fields_.at(column).empty()) return std::nullopt;
  return integer(column);
}

std::optional<double> Reader::optional_number(std::size_t column) const {
  if (fields_.at(column).empty()) return std::nullopt;
  return number(column);
}

std::optional<bool> Reader::optional_flag(std::size_t column) const {
  const auto& f = fields_.at(column);
  if (f.empty()) return std::nullopt;
  if (f == "1" || f == "true" || f == "True") return true;
  if (f == "0" || f == "false" || f == "False") return false;
  throw IngestError(fmt::format("{}: expected 0/1, found '{}'", where(column), f));
}

}  // namespace solartwin::csv
