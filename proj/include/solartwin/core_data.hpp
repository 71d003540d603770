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

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace solartwin {

// Categorical household features used by both classifiers, in column order.
enum class Feature : std::size_t {
  NHSLDMEM,
  BEDROOMS,
  TYPEHUQ,
  FUELHEAT,
  KOWNRENT,
  YEARMADERANGE,
  MONEYPY,
  BA_climate,
};

inline constexpr std::size_t kFeatureCount = 8;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "NHSLDMEM", "BEDROOMS", "TYPEHUQ", "FUELHEAT", "KOWNRENT", "YEARMADERANGE", "MONEYPY", "BA_climate"};

struct CodeRange {
  int min = 0;
  int max = 0;

  int size() const noexcept { return max - min + 1; }
  bool contains(int code) const noexcept { return code >= min && code <= max; }
};

// Inclusive code domain per feature. Defaults follow the RECS 2020 codebook,
// with FUELHEAT and BA_climate remapped onto contiguous small integers.
struct FeatureSchema {
  std::array<CodeRange, kFeatureCount> domains = {{
      {1, 7},   // NHSLDMEM: household members, 7 = 7+
      {0, 6},   // BEDROOMS
      {1, 5},   // TYPEHUQ: mobile, SF detached, SF attached, apt 2-4, apt 5+
      {0, 6},   // FUELHEAT: none, gas, propane, oil, electric, wood, other
      {1, 3},   // KOWNRENT: own, rent, occupy without rent
      {1, 9},   // YEARMADERANGE: <1950 ... 2016-2020
      {1, 16},  // MONEYPY: income bins
      {0, 7},   // BA_climate: building-america climate zone
  }};

  const CodeRange& operator[](Feature f) const { return domains[static_cast<std::size_t>(f)]; }
  CodeRange& operator[](Feature f) { return domains[static_cast<std::size_t>(f)]; }
};

using FeatureCodes = std::array<int, kFeatureCount>;

struct HouseholdRecord {
  std::int64_t id = 0;
  std::string state;
  std::string county;
  std::string tract;
  double lat = 0.0;
  double lon = 0.0;
  FeatureCodes features{};
  std::optional<int> sqft_class;
  std::optional<double> sqft_value;
  std::optional<bool> solar;
  std::optional<bool> lmi;
  std::optional<bool> rural;

  int feature(Feature f) const { return features[static_cast<std::size_t>(f)]; }
  int& feature(Feature f) { return features[static_cast<std::size_t>(f)]; }

  friend bool operator==(const HouseholdRecord&, const HouseholdRecord&) = default;
};

using HouseholdTable = std::vector<HouseholdRecord>;

// households.csv. Required columns:
//   id,state,county,tract,lat,lon,<eight feature codes>
// Optional columns: sqft_class,sqft_value,solar,lmi,rural (empty cell = unknown).
HouseholdTable read_households(std::istream& in, const FeatureSchema& schema = {},
                               std::string_view source = "households.csv");
HouseholdTable load_households(const std::filesystem::path& path, const FeatureSchema& schema = {});
void write_households(std::ostream& out, const HouseholdTable& table);
void save_households(const std::filesystem::path& path, const HouseholdTable& table);

// Validates a table in memory against the same invariants the loader enforces.
void validate_households(const HouseholdTable& table, const FeatureSchema& schema = {});

using Date = std::chrono::sys_days;

Date parse_date(std::string_view text);
std::string format_date(Date d);
int day_of_year(Date d);

// Hourly global horizontal irradiance for one census tract, W/m^2.
struct IrradianceSeries {
  std::string tract;
  Date start_date{};
  std::vector<double> ghi;

  std::size_t day_count() const noexcept { return ghi.size() / 24; }
  Date end_date() const noexcept { return start_date + std::chrono::days(static_cast<int>(day_count())); }
  bool covers(Date d) const noexcept { return d >= start_date && d < end_date(); }
  // The 24 values for date `d`; throws DomainError if the series does not cover it.
  std::span<const double> hours_on(Date d) const;

  friend bool operator==(const IrradianceSeries&, const IrradianceSeries&) = default;
};

// irradiance_<tract>.csv: date,hour,ghi_wm2
IrradianceSeries read_irradiance(std::istream& in, std::string tract,
                                 std::string_view source = "irradiance.csv");
IrradianceSeries load_irradiance(const std::filesystem::path& path);
void write_irradiance(std::ostream& out, const IrradianceSeries& series);
void save_irradiance(const std::filesystem::path& path, const IrradianceSeries& series);
std::string irradiance_file_name(std::string_view tract);
// Loads every irradiance_<tract>.csv in a directory, keyed by tract.
std::map<std::string, IrradianceSeries> load_irradiance_dir(const std::filesystem::path& dir);

struct AdopterTarget {
  std::string state;
  std::int64_t count = 0;

  friend bool operator==(const AdopterTarget&, const AdopterTarget&) = default;
};

// targets.csv: state,count
std::vector<AdopterTarget> read_targets(std::istream& in, std::string_view source = "targets.csv");
std::vector<AdopterTarget> load_targets(const std::filesystem::path& path);
void write_targets(std::ostream& out, std::span<const AdopterTarget> targets);
void save_targets(const std::filesystem::path& path, std::span<const AdopterTarget> targets);

using Edge = std::pair<std::size_t, std::size_t>;

// Undirected simple graph. Edges are stored with first < second, in order of
// first appearance.
struct Graph {
  std::size_t node_count = 0;
  std::vector<Edge> edges;

  friend bool operator==(const Graph&, const Graph&) = default;
};

// Normalizes, deduplicates and validates an edge list. Throws on self-loops or
// out-of-range endpoints.
Graph make_graph(std::size_t node_count, std::span<const Edge> edges);

// network.edges: one "u v" (or "u,v") pair per line. A "# nodes N" comment
// fixes the node count; otherwise it is max endpoint + 1.
Graph read_network(std::istream& in, std::string_view source = "network.edges");
Graph load_network(const std::filesystem::path& path);
void write_network(std::ostream& out, const Graph& graph);
void save_network(const std::filesystem::path& path, const Graph& graph);

// Compressed adjacency lists, neighbors of each node sorted ascending.
struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> neighbors;

  std::span<const std::size_t> of(std::size_t node) const {
    return {neighbors.data() + offsets[node], offsets[node + 1] - offsets[node]};
  }
  std::size_t degree(std::size_t node) const { return offsets[node + 1] - offsets[node]; }
};

Adjacency build_adjacency(const Graph& graph);

}  // namespace solartwin
