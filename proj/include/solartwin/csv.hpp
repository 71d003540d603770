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

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace solartwin::csv {

// Minimal reader for the plain comma-separated files this project exchanges:
// mandatory header, no quoting, no embedded commas.
class Reader {
 public:
  Reader(std::istream& in, std::string_view source);

  const std::vector<std::string>& header() const noexcept { return header_; }
  // Column position, or nullopt when absent.
  std::optional<std::size_t> column(std::string_view name) const;
  // Column position; throws IngestError "missing column NAME" when absent.
  std::size_t require(std::string_view name) const;

  // Advances to the next non-empty row. Returns false at end of input.
  bool next();
  const std::vector<std::string>& row() const noexcept { return fields_; }
  std::size_t row_number() const noexcept { return row_number_; }
  std::string_view source() const noexcept { return source_; }

  // Location prefix for error messages, e.g. "households.csv row 3 column MONEYPY".
  std::string where(std::size_t column) const;

  std::int64_t integer(std::size_t column) const;
  double number(std::size_t column) const;
  std::optional<std::int64_t> optional_integer(std::size_t column) const;
  std::optional<double> optional_number(std::size_t column) const;
  std::optional<bool> optional_flag(std::size_t column) const;
  const std::string& text(std::size_t column) const { return fields_.at(column); }

 private:
  std::istream& in_;
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::string> fields_;
  std::size_t row_number_ = 0;
};

std::vector<std::string> split(std::string_view line, char sep = ',');

std::optional<std::int64_t> parse_integer(std::string_view text);
std::optional<double> parse_number(std::string_view text);

// Shortest representation that parses back to the same double.
std::string format_number(double value);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace solartwin::csv
