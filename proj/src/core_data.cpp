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

#include "solartwin/core_data.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "solartwin/csv.hpp"
#include "solartwin/error.hpp"

namespace solartwin {

namespace {

constexpr std::array<std::string_view, 6> kIdentityColumns = {"id", "state", "county", "tract", "lat", "lon"};
constexpr std::array<std::string_view, 5> kOptionalColumns = {"sqft_class", "sqft_value", "solar", "lmi", "rural"};

void check_feature(const HouseholdRecord& r, std::size_t f, const FeatureSchema& schema, std::string_view where) {
  const auto& dom = schema.domains[f];
  if (!dom.contains(r.features[f]))
    throw IngestError(fmt::format("{}: {} code {} outside domain [{}, {}]", where, kFeatureNames[f], r.features[f],
                                  dom.min, dom.max));
}

void check_record(const HouseholdRecord& r, const FeatureSchema& schema, std::string_view where) {
  if (!(r.lat >= -90.0 && r.lat <= 90.0)) throw IngestError(fmt::format("{}: lat {} out of range", where, r.lat));
  if (!(r.lon >= -180.0 && r.lon <= 180.0)) throw IngestError(fmt::format("{}: lon {} out of range", where, r.lon));
  for (std::size_t f = 0; f < kFeatureCount; ++f) check_feature(r, f, schema, where);
  if (r.sqft_class && (*r.sqft_class < 0 || *r.sqft_class > 7))
    throw IngestError(fmt::format("{}: sqft_class {} outside [0, 7]", where, *r.sqft_class));
  if (r.sqft_value && !(*r.sqft_value > 0.0 && std::isfinite(*r.sqft_value)))
    throw IngestError(fmt::format("{}: sqft_value must be positive", where));
}

std::string flag_text(const std::optional<bool>& v) { return v ? (*v ? "1" : "0") : ""; }

}  // namespace

HouseholdTable read_households(std::istream& in, const FeatureSchema& schema, std::string_view source) {
  csv::Reader reader(in, source);

  std::array<std::size_t, kIdentityColumns.size()> id_cols{};
  for (std::size_t i = 0; i < kIdentityColumns.size(); ++i) id_cols[i] = reader.require(kIdentityColumns[i]);
  std::array<std::size_t, kFeatureCount> feat_cols{};
  for (std::size_t f = 0; f < kFeatureCount; ++f) feat_cols[f] = reader.require(kFeatureNames[f]);
  std::array<std::optional<std::size_t>, kOptionalColumns.size()> opt_cols{};
  for (std::size_t i = 0; i < kOptionalColumns.size(); ++i) opt_cols[i] = reader.column(kOptionalColumns[i]);

  for (const auto& name : reader.header()) {
    const bool known = std::ranges::find(kIdentityColumns, name) != kIdentityColumns.end() ||
                       std::ranges::find(kFeatureNames, name) != kFeatureNames.end() ||
                       std::ranges::find(kOptionalColumns, name) != kOptionalColumns.end();
    if (!known) throw IngestError(fmt::format("{}: unknown column {}", source, name));
  }

  HouseholdTable table;
  std::unordered_set<std::int64_t> seen;
  while (reader.next()) {
    HouseholdRecord r;
    r.id = reader.integer(id_cols[0]);
    r.state = reader.text(id_cols[1]);
    r.county = reader.text(id_cols[2]);
    r.tract = reader.text(id_cols[3]);
    r.lat = reader.number(id_cols[4]);
    r.lon = reader.number(id_cols[5]);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      const auto code = reader.integer(feat_cols[f]);
      r.features[f] = static_cast<int>(code);
      if (!schema.domains[f].contains(r.features[f]))
        throw IngestError(fmt::format("{}: code {} outside domain [{}, {}]", reader.where(feat_cols[f]), code,
                                      schema.domains[f].min, schema.domains[f].max));
    }
    if (opt_cols[0]) {
      if (auto v = reader.optional_integer(*opt_cols[0])) r.sqft_class = static_cast<int>(*v);
    }
    if (opt_cols[1]) r.sqft_value = reader.optional_number(*opt_cols[1]);
    if (opt_cols[2]) r.solar = reader.optional_flag(*opt_cols[2]);
    if (opt_cols[3]) r.lmi = reader.optional_flag(*opt_cols[3]);
    if (opt_cols[4]) r.rural = reader.optional_flag(*opt_cols[4]);

    const auto where = fmt::format("{} row {}", source, reader.row_number());
    check_record(r, schema, where);
    if (!seen.insert(r.id).second) throw IngestError(fmt::format("{} column id: duplicate id {}", where, r.id));
    table.push_back(std::move(r));
  }
  return table;
}

HouseholdTable load_households(const std::filesystem::path& path, const FeatureSchema& schema) {
  auto in = csv::open_input(path);
  return read_households(in, schema, path.filename().string());
}

void validate_households(const HouseholdTable& table, const FeatureSchema& schema) {
  std::unordered_set<std::int64_t> seen;
  for (const auto& r : table) {
    const auto where = fmt::format("household {}", r.id);
    check_record(r, schema, where);
    if (!seen.insert(r.id).second) throw IngestError(fmt::format("duplicate id {}", r.id));
  }
}

void write_households(std::ostream& out, const HouseholdTable& table) {
  const bool has_class = std::ranges::any_of(table, [](const auto& r) { return r.sqft_class.has_value(); });
  const bool has_value = std::ranges::any_of(table, [](const auto& r) { return r.sqft_value.has_value(); });
  const bool has_solar = std::ranges::any_of(table, [](const auto& r) { return r.solar.has_value(); });
  const bool has_lmi = std::ranges::any_of(table, [](const auto& r) { return r.lmi.has_value(); });
  const bool has_rural = std::ranges::any_of(table, [](const auto& r) { return r.rural.has_value(); });

  out << "id,state,county,tract,lat,lon";
  for (auto name : kFeatureNames) out << ',' << name;
  if (has_class) out << ",sqft_class";
  if (has_value) out << ",sqft_value";
  if (has_solar) out << ",solar";
  if (has_lmi) out << ",lmi";
  if (has_rural) out << ",rural";
  out << '\n';

  for (const auto& r : table) {
    out << r.id << ',' << r.state << ',' << r.county << ',' << r.tract << ',' << csv::format_number(r.lat) << ','
        << csv::format_number(r.lon);
    for (int code : r.features) out << ',' << code;
    if (has_class) out << ',' << (r.sqft_class ? std::to_string(*r.sqft_class) : "");
    if (has_value) out << ',' << (r.sqft_value ? csv::format_number(*r.sqft_value) : "");
    if (has_solar) out << ',' << flag_text(r.solar);
    if (has_lmi) out << ',' << flag_text(r.lmi);
    if (has_rural) out << ',' << flag_text(r.rural);
    out << '\n';
  }
}

void save_households(const std::filesystem::path& path, const HouseholdTable& table) {
  auto out = csv::open_output(path);
  write_households(out, table);
}

// --- dates -----------------------------------------------------------------

Date parse_date(std::string_view text) {
  const auto parts = csv::split(text, '-');
  if (parts.size() == 3) {
    const auto y = csv::parse_integer(parts[0]);
    const auto m = csv::parse_integer(parts[1]);
    const auto d = csv::parse_integer(parts[2]);
    if (y && m && d) {
      const std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(*y)},
                                            std::chrono::month{static_cast<unsigned>(*m)},
                                            std::chrono::day{static_cast<unsigned>(*d)}};
      if (ymd.ok()) return Date{ymd};
    }
  }
  throw IngestError(fmt::format("invalid date '{}', expected YYYY-MM-DD", text));
}

std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()));
}

int day_of_year(Date d) {
  const std::chrono::year_month_day ymd{d};
  const Date jan1{ymd.year() / std::chrono::January / 1};
  return static_cast<int>((d - jan1).count()) + 1;
}

// --- irradiance ------------------------------------------------------------

std::span<const double> IrradianceSeries::hours_on(Date d) const {
  if (!covers(d)) throw DomainError(fmt::format("irradiance for tract {} does not cover {}", tract, format_date(d)));
  const auto offset = static_cast<std::size_t>((d - start_date).count()) * 24;
  return {ghi.data() + offset, 24};
}

IrradianceSeries read_irradiance(std::istream& in, std::string tract, std::string_view source) {
  csv::Reader reader(in, source);
  const auto c_date = reader.require("date");
  const auto c_hour = reader.require("hour");
  const auto c_ghi = reader.require("ghi_wm2");

  IrradianceSeries series;
  series.tract = std::move(tract);
  std::size_t index = 0;
  while (reader.next()) {
    const Date date = parse_date(reader.text(c_date));
    const auto hour = reader.integer(c_hour);
    if (hour < 0 || hour > 23) throw IngestError(fmt::format("{}: hour {} outside 0-23", reader.where(c_hour), hour));
    if (index == 0) {
      if (hour != 0)
        throw IngestError(fmt::format("{}: gap at day 1 hour 0 ({} 00:00): series must start at hour 0", source,
                                      format_date(date)));
      series.start_date = date;
    }
    const Date expected_date = series.start_date + std::chrono::days(static_cast<int>(index / 24));
    const auto expected_hour = static_cast<std::int64_t>(index % 24);
    if (date != expected_date || hour != expected_hour)
      throw IngestError(fmt::format("{}: gap at day {} hour {} ({} {:02d}:00), found {} {:02d}:00", source,
                                    index / 24 + 1, expected_hour, format_date(expected_date), expected_hour,
                                    format_date(date), hour));
    const double ghi = reader.number(c_ghi);
    if (!std::isfinite(ghi) || ghi < 0.0)
      throw IngestError(fmt::format("{}: invalid GHI {} at {} {:02d}:00", source, ghi, format_date(date), hour));
    series.ghi.push_back(ghi);
    ++index;
  }
  if (index % 24 != 0) {
    const Date last = series.start_date + std::chrono::days(static_cast<int>(index / 24));
    throw IngestError(fmt::format("{}: gap at day {} hour {} ({} {:02d}:00): final day incomplete", source,
                                  index / 24 + 1, index % 24, format_date(last), index % 24));
  }
  return series;
}

std::string irradiance_file_name(std::string_view tract) { return fmt::format("irradiance_{}.csv", tract); }

IrradianceSeries load_irradiance(const std::filesystem::path& path) {
  const auto stem = path.stem().string();
  constexpr std::string_view prefix = "irradiance_";
  std::string tract = stem.starts_with(prefix) ? stem.substr(prefix.size()) : stem;
  auto in = csv::open_input(path);
  return read_irradiance(in, std::move(tract), path.filename().string());
}

std::map<std::string, IrradianceSeries> load_irradiance_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IngestError(fmt::format("{}: not a directory", dir.string()));
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("irradiance_") && name.ends_with(".csv")) files.push_back(entry.path());
  }
  std::ranges::sort(files);
  std::map<std::string, IrradianceSeries> out;
  for (const auto& f : files) {
    auto series = load_irradiance(f);
    auto tract = series.tract;
    out.emplace(std::move(tract), std::move(series));
  }
  return out;
}

void write_irradiance(std::ostream& out, const IrradianceSeries& series) {
  out << "date,hour,ghi_wm2\n";
  for (std::size_t i = 0; i < series.ghi.size(); ++i) {
    const Date d = series.start_date + std::chrono::days(static_cast<int>(i / 24));
    out << format_date(d) << ',' << i % 24 << ',' << csv::format_number(series.ghi[i]) << '\n';
  }
}

void save_irradiance(const std::filesystem::path& path, const IrradianceSeries& series) {
  auto out = csv::open_output(path);
  write_irradiance(out, series);
}

// --- targets ---------------------------------------------------------------

std::vector<AdopterTarget> read_targets(std::istream& in, std::string_view source) {
  csv::Reader reader(in, source);
  const auto c_state = reader.require("state");
  const auto c_count = reader.require("count");
  std::vector<AdopterTarget> out;
  while (reader.next()) {
    AdopterTarget t{reader.text(c_state), reader.integer(c_count)};
    if (t.count < 0) throw IngestError(fmt::format("{}: negative count {}", reader.where(c_count), t.count));
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<AdopterTarget> load_targets(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  return read_targets(in, path.filename().string());
}

void write_targets(std::ostream& out, std::span<const AdopterTarget> targets) {
  out << "state,count\n";
  for (const auto& t : targets) out << t.state << ',' << t.count << '\n';
}

void save_targets(const std::filesystem::path& path, std::span<const AdopterTarget> targets) {
  auto out = csv::open_output(path);
  write_targets(out, targets);
}

// --- network ---------------------------------------------------------------

Graph make_graph(std::size_t node_count, std::span<const Edge> edges) {
  Graph g;
  g.node_count = node_count;
  std::set<Edge> seen;
  for (auto [u, v] : edges) {
    if (u == v) throw IngestError(fmt::format("self-loop on node {}", u));
    if (u >= node_count || v >= node_count)
      throw IngestError(fmt::format("edge ({}, {}) references a node >= node count {}", u, v, node_count));
    const Edge e = u < v ? Edge{u, v} : Edge{v, u};
    if (seen.insert(e).second) g.edges.push_back(e);
  }
  return g;
}

Graph read_network(std::istream& in, std::string_view source) {
  std::vector<Edge> edges;
  std::optional<std::size_t> declared_nodes;
  std::size_t max_node = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    while (!view.empty() && (view.back() == '\r' || view.back() == ' ')) view.remove_suffix(1);
    if (view.empty()) continue;
    if (view.front() == '#') {
      const auto rest = view.substr(1);
      const auto parts = csv::split(rest, ' ');
      std::vector<std::string> words;
      for (const auto& p : parts)
        if (!p.empty()) words.push_back(p);
      if (words.size() == 2 && words[0] == "nodes") {
        auto n = csv::parse_integer(words[1]);
        if (!n || *n < 0) throw IngestError(fmt::format("{} line {}: invalid node count", source, line_no));
        declared_nodes = static_cast<std::size_t>(*n);
      }
      continue;
    }
    std::string normalized(view);
    std::ranges::replace(normalized, ',', ' ');
    std::ranges::replace(normalized, '\t', ' ');
    std::vector<std::int64_t> ids;
    for (const auto& tok : csv::split(normalized, ' ')) {
      if (tok.empty()) continue;
      auto v = csv::parse_integer(tok);
      if (!v || *v < 0) throw IngestError(fmt::format("{} line {}: invalid node id '{}'", source, line_no, tok));
      ids.push_back(*v);
    }
    if (ids.size() != 2)
      throw IngestError(fmt::format("{} line {}: expected two node ids, found {}", source, line_no, ids.size()));
    const Edge e{static_cast<std::size_t>(ids[0]), static_cast<std::size_t>(ids[1])};
    if (e.first == e.second) throw IngestError(fmt::format("{} line {}: self-loop on node {}", source, line_no, e.first));
    max_node = std::max({max_node, e.first, e.second});
    edges.push_back(e);
  }
  const std::size_t inferred = edges.empty() ? 0 : max_node + 1;
  if (declared_nodes && *declared_nodes < inferred)
    throw IngestError(fmt::format("{}: declared {} nodes but edges reference node {}", source, *declared_nodes, max_node));
  return make_graph(declared_nodes.value_or(inferred), edges);
}

Graph load_network(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  return read_network(in, path.filename().string());
}

void write_network(std::ostream& out, const Graph& graph) {
  out << "# nodes " << graph.node_count << '\n';
  for (auto [u, v] : graph.edges) out << u << ' ' << v << '\n';
}

void save_network(const std::filesystem::path& path, const Graph& graph) {
  auto out = csv::open_output(path);
  write_network(out, graph);
}

Adjacency build_adjacency(const Graph& graph) {
  Adjacency adj;
  adj.offsets.assign(graph.node_count + 1, 0);
  for (auto [u, v] : graph.edges) {
    ++adj.offsets[u + 1];
    ++adj.offsets[v + 1];
  }
  for (std::size_t i = 0; i < graph.node_count; ++i) adj.offsets[i + 1] += adj.offsets[i];
  adj.neighbors.resize(adj.offsets.back());
  std::vector<std::size_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  for (auto [u, v] : graph.edges) {
    adj.neighbors[cursor[u]++] = v;
    adj.neighbors[cursor[v]++] = u;
  }
  for (std::size_t i = 0; i < graph.node_count; ++i)
    std::sort(adj.neighbors.begin() + static_cast<std::ptrdiff_t>(adj.offsets[i]),
              adj.neighbors.begin() + static_cast<std::ptrdiff_t>(adj.offsets[i + 1]));
  return adj;
}

}  // namespace solartwin
