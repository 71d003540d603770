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

#include "solartwin/pv_engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "solartwin/csv.hpp"
#include "solartwin/error.hpp"

namespace solartwin {

double ExponentialAreaModel::density(double area) const {
  if (area < location) return 0.0;
  return rate * std::exp(-rate * (area - location));
}

std::vector<OrientationWeight> default_orientation_table() {
  constexpr std::array<std::pair<double, double>, 3> tilts = {{{15.0, 0.3}, {25.0, 0.4}, {35.0, 0.3}}};
  // N NE E SE S SW W NW
  constexpr std::array<double, 8> sectors = {0.07, 0.07, 0.12, 0.15, 0.25, 0.15, 0.12, 0.07};
  std::vector<OrientationWeight> table;
  for (auto [tilt, tw] : tilts)
    for (std::size_t a = 0; a < sectors.size(); ++a)
      table.push_back({tilt, static_cast<Azimuth>(a), tw * sectors[a]});
  return table;
}

const ExponentialAreaModel& PvConfig::area_model(BuildingType type, int planes) const {
  if (type == BuildingType::Small) return planes == 1 ? small_single : small_multi;
  return planes == 1 ? medium_single : medium_multi;
}

void PvConfig::validate() const {
  if (samples < 1) throw ConfigError("pv.samples must be >= 1");
  if (area_candidates < 1) throw ConfigError("pv.area_candidates must be >= 1");
  if (!(yield_min <= yield_max) || !(ratio_min <= ratio_max)) throw ConfigError("pv: min bound exceeds max bound");
  if (!(panel_area_m2 > 0.0)) throw ConfigError("pv.panel_area_m2 must be positive");
  auto check_weights = [](const auto& table, std::string_view name, auto weight_of) {
    double total = 0.0;
    for (const auto& e : table) {
      if (!(weight_of(e) >= 0.0)) throw ConfigError(fmt::format("pv.{}: negative weight", name));
      total += weight_of(e);
    }
    if (!(total > 0.0)) throw ConfigError(fmt::format("pv.{}: weights sum to zero", name));
  };
  check_weights(planes_small, "planes_small", [](const auto& e) { return e.second; });
  check_weights(planes_medium, "planes_medium", [](const auto& e) { return e.second; });
  check_weights(orientations_small, "orientations_small", [](const auto& e) { return e.weight; });
  check_weights(orientations_medium, "orientations_medium", [](const auto& e) { return e.weight; });
  for (const auto& o : orientations_small)
    if (!(o.tilt_deg >= 0.0 && o.tilt_deg < 90.0)) throw ConfigError("pv: tilt must lie in [0, 90)");
  for (const auto& o : orientations_medium)
    if (!(o.tilt_deg >= 0.0 && o.tilt_deg < 90.0)) throw ConfigError("pv: tilt must lie in [0, 90)");
}

double roof_area_m2(double sqft, const PvConfig& cfg) { return cfg.roof_factor * (sqft * cfg.sqft_to_m2); }

BuildingType building_type_for(double roof_area, const PvConfig& cfg) {
  return roof_area <= cfg.small_roof_limit_m2 ? BuildingType::Small : BuildingType::Medium;
}

double snap_to_panels(double area_m2, const PvConfig& cfg) {
  return std::floor(area_m2 / cfg.panel_area_m2) * cfg.panel_area_m2;
}

TimeInvariantSamples sample_time_invariant(const HouseholdRecord& h, const PvConfig& cfg, Rng& rng) {
  if (!h.sqft_value) throw DomainError(fmt::format("household {} has no sqft_value", h.id));
  const auto n = static_cast<std::size_t>(cfg.samples);

  TimeInvariantSamples ti;
  ti.household = h.id;
  ti.lat = h.lat;
  ti.roof_area_m2 = roof_area_m2(*h.sqft_value, cfg);
  ti.building_type = building_type_for(ti.roof_area_m2, cfg);

  ti.yield.resize(n);
  ti.performance_ratio.resize(n);
  for (auto& y : ti.yield) y = rng.uniform(cfg.yield_min, cfg.yield_max);
  for (auto& r : ti.performance_ratio) r = rng.uniform(cfg.ratio_min, cfg.ratio_max);

  const auto& plane_table = ti.building_type == BuildingType::Small ? cfg.planes_small : cfg.planes_medium;
  std::vector<double> plane_weights;
  for (const auto& [count, w] : plane_table) plane_weights.push_back(w);
  ti.planes.resize(n);
  for (auto& p : ti.planes) p = plane_table[rng.weighted_index(plane_weights)].first;

  // One candidate pool per (r, t) model; each sample draws its area from the
  // pool matching its plane count.
  auto candidate_pool = [&](const ExponentialAreaModel& model) {
    std::pair<std::vector<double>, std::vector<double>> pool;
    auto& [values, weights] = pool;
    values.resize(static_cast<std::size_t>(cfg.area_candidates));
    weights.resize(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
      values[j] = rng.uniform(0.0, ti.roof_area_m2);
      weights[j] = model.density(values[j]);
    }
    if (std::accumulate(weights.begin(), weights.end(), 0.0) <= 0.0) std::ranges::fill(weights, 1.0);
    return pool;
  };
  const auto single = candidate_pool(cfg.area_model(ti.building_type, 1));
  const auto multi = candidate_pool(cfg.area_model(ti.building_type, 2));

  ti.area_m2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [values, weights] = ti.planes[i] == 1 ? single : multi;
    ti.area_m2[i] = snap_to_panels(values[rng.weighted_index(weights)], cfg);
  }

  const auto& orientations = ti.building_type == BuildingType::Small ? cfg.orientations_small : cfg.orientations_medium;
  std::vector<double> orientation_weights;
  for (const auto& o : orientations) orientation_weights.push_back(o.weight);
  ti.tilt_deg.resize(n);
  ti.azimuth.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& o = orientations[rng.weighted_index(orientation_weights)];
    ti.tilt_deg[i] = o.tilt_deg;
    ti.azimuth[i] = o.azimuth;
  }

  ti.arpr.resize(n);
  for (std::size_t i = 0; i < n; ++i) ti.arpr[i] = ti.area_m2[i] * ti.yield[i] * ti.performance_ratio[i];
  return ti;
}

TimeInvariantSamples sample_time_invariant(const HouseholdRecord& h, const PvConfig& cfg, std::uint64_t seed) {
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(h.id)));
  return sample_time_invariant(h, cfg, rng);
}

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments moments(std::span<const double> v) {
  if (v.empty()) throw DomainError("hourly_energy: empty sample set");
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, ss / static_cast<double>(v.size())};
}

}  // namespace

// Over the full outer product of two independent sample sets,
//   E[xy] = E[x]E[y],  Var[xy] = Vx*Vy + Vx*E[y]^2 + E[x]^2*Vy.
HourlyEnergy hourly_energy(std::span<const double> arpr, std::span<const double> ht) {
  const auto a = moments(arpr);
  const auto h = moments(ht);
  const double var = a.var * h.var + a.var * h.mean * h.mean + a.mean * a.mean * h.var;
  return {a.mean * h.mean / 1000.0, std::sqrt(std::max(0.0, var)) / 1000.0};
}

HourlyEnergy hourly_energy(std::span<const double> arpr, double ht) {
  const auto a = moments(arpr);
  return {a.mean * ht / 1000.0, std::sqrt(a.var) * ht / 1000.0};
}

EnergyProfile compute_daily_profile(const TimeInvariantSamples& ti, std::span<const double> ghi_day, Date date,
                                    const PvConfig& cfg) {
  if (ghi_day.size() != 24) throw DomainError("compute_daily_profile: expected 24 hourly GHI values");
  const double delta = declination(day_of_year(date));
  std::vector<double> gain(ti.size());
  for (std::size_t i = 0; i < gain.size(); ++i)
    gain[i] = tilt_gain(ti.lat, delta, ti.tilt_deg[i], cfg.degradation(ti.azimuth[i]));

  EnergyProfile p;
  p.household = ti.household;
  p.date = date;
  std::vector<double> ht(gain.size());
  double var_sum = 0.0;
  for (std::size_t w = 0; w < 24; ++w) {
    if (ghi_day[w] == 0.0) continue;
    for (std::size_t i = 0; i < ht.size(); ++i) ht[i] = ghi_day[w] * gain[i];
    const auto e = hourly_energy(ti.arpr, ht);
    p.hourly_mean[w] = e.mean_kwh;
    p.hourly_std[w] = e.std_kwh;
    p.daily_mean += e.mean_kwh;
    var_sum += e.std_kwh * e.std_kwh;
  }
  p.daily_std = std::sqrt(var_sum);
  return p;
}

// --- periods ---------------------------------------------------------------

Period Period::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw ConfigError(fmt::format("period '{}': expected KIND:VALUE with KIND in date|week|month|year", spec));
  const auto kind = spec.substr(0, colon);
  Period p;
  p.value = std::string(spec.substr(colon + 1));
  if (kind == "date") p.kind = Kind::Date;
  else if (kind == "week") p.kind = Kind::Week;
  else if (kind == "month") p.kind = Kind::Month;
  else if (kind == "year") p.kind = Kind::Year;
  else throw ConfigError(fmt::format("period '{}': unknown kind '{}'", spec, kind));
  (void)p.dates();
  return p;
}

std::vector<Date> Period::dates() const {
  using namespace std::chrono;
  auto bad = [&] { return ConfigError(fmt::format("invalid period value '{}'", value)); };
  auto int_of = [&](std::string_view s) {
    auto v = csv::parse_integer(s);
    if (!v) throw bad();
    return static_cast<int>(*v);
  };
  std::vector<Date> out;
  switch (kind) {
    case Kind::Date:
      out.push_back(parse_date(value));
      break;
    case Kind::Week: {
      const auto dash = value.find("-W");
      if (dash == std::string::npos) throw bad();
      const int y = int_of(std::string_view(value).substr(0, dash));
      const int w = int_of(std::string_view(value).substr(dash + 2));
      const Date jan4{year{y} / January / 4};
      const Date week1 = jan4 - days(weekday{jan4}.iso_encoding() - 1);
      const Date start = week1 + weeks(w - 1);
      // Week w belongs to year y iff its Thursday does.
      if (w < 1 || w > 53 || year_month_day{start + days(3)}.year() != year{y}) throw bad();
      for (int d = 0; d < 7; ++d) out.push_back(start + days(d));
      break;
    }
    case Kind::Month: {
      const auto parts = csv::split(value, '-');
      if (parts.size() != 2) throw bad();
      const year_month ym{year{int_of(parts[0])}, month{static_cast<unsigned>(int_of(parts[1]))}};
      if (!ym.ok()) throw bad();
      for (Date d{ym / 1}; d <= Date{ym / last}; d += days(1)) out.push_back(d);
      break;
    }
    case Kind::Year: {
      const year y{int_of(value)};
      for (Date d{y / January / 1}; d <= Date{y / December / 31}; d += days(1)) out.push_back(d);
      break;
    }
  }
  return out;
}

std::string Period::label() const {
  constexpr std::array<std::string_view, 4> names = {"date", "week", "month", "year"};
  return fmt::format("{}-{}", names[static_cast<std::size_t>(kind)], value);
}

// --- parallel generation ---------------------------------------------------

namespace {

// Runs body(begin, end) over contiguous blocks of [0, n). The first exception
// in block order is rethrown after all workers join.
template <typename Body>
void for_blocks(std::size_t n, int workers, Body body) {
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, std::max<std::size_t>(n, 1));
  if (w == 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(w);
  {
    std::vector<std::jthread> threads;
    threads.reserve(w);
    for (std::size_t k = 0; k < w; ++k) {
      const std::size_t begin = n * k / w;
      const std::size_t end = n * (k + 1) / w;
      threads.emplace_back([&, k, begin, end] {
        try {
          body(begin, end);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

const IrradianceSeries& series_for(const std::map<std::string, IrradianceSeries>& irradiance, const HouseholdRecord& h,
                                   std::span<const Date> dates) {
  const auto it = irradiance.find(h.tract);
  if (it == irradiance.end())
    throw DomainError(fmt::format("missing irradiance for tract {} on {}", h.tract,
                                  dates.empty() ? std::string("any date") : format_date(dates.front())));
  for (Date d : dates)
    if (!it->second.covers(d))
      throw DomainError(fmt::format("missing irradiance for tract {} on {}", h.tract, format_date(d)));
  return it->second;
}

}  // namespace

ProfileSet generate_profiles(const HouseholdTable& population, const std::map<std::string, IrradianceSeries>& irradiance,
                             const Period& period, int workers, std::uint64_t seed, const PvConfig& cfg) {
  cfg.validate();
  std::vector<const HouseholdRecord*> adopters;
  for (const auto& h : population)
    if (h.solar.value_or(false)) adopters.push_back(&h);
  std::ranges::sort(adopters, {}, [](const HouseholdRecord* h) { return h->id; });

  ProfileSet set;
  set.dates = period.dates();
  std::vector<const IrradianceSeries*> series;
  for (const auto* h : adopters) {
    if (!h->sqft_value) throw DomainError(fmt::format("household {} has no sqft_value", h->id));
    series.push_back(&series_for(irradiance, *h, set.dates));
  }

  const std::size_t n_dates = set.dates.size();
  std::vector<EnergyProfile> by_household(adopters.size() * n_dates);
  for_blocks(adopters.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto ti = sample_time_invariant(*adopters[i], cfg, seed);
      for (std::size_t d = 0; d < n_dates; ++d)
        by_household[i * n_dates + d] =
            compute_daily_profile(ti, series[i]->hours_on(set.dates[d]), set.dates[d], cfg);
    }
  });

  set.profiles.reserve(by_household.size());
  for (std::size_t d = 0; d < n_dates; ++d)
    for (std::size_t i = 0; i < adopters.size(); ++i) set.profiles.push_back(by_household[i * n_dates + d]);
  return set;
}

std::vector<double> potential_daily_generation(const HouseholdTable& population,
                                               const std::map<std::string, IrradianceSeries>& irradiance,
                                               std::span<const Date> dates, int workers, std::uint64_t seed,
                                               const PvConfig& cfg) {
  cfg.validate();
  if (dates.empty()) throw DomainError("potential_daily_generation: empty date list");
  std::vector<const IrradianceSeries*> series;
  for (const auto& h : population) {
    if (!h.sqft_value) throw DomainError(fmt::format("household {} has no sqft_value", h.id));
    series.push_back(&series_for(irradiance, h, dates));
  }
  std::vector<double> out(population.size(), 0.0);
  for_blocks(population.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto ti = sample_time_invariant(population[i], cfg, seed);
      double total = 0.0;
      for (Date d : dates) total += compute_daily_profile(ti, series[i]->hours_on(d), d, cfg).daily_mean;
      out[i] = total / static_cast<double>(dates.size());
    }
  });
  return out;
}

void write_profiles(const std::filesystem::path& dir, const ProfileSet& set, const Period& period) {
  std::filesystem::create_directories(dir);
  auto daily = csv::open_output(dir / fmt::format("daily_{}.csv", period.label()));
  daily << "household_id,date,daily_mean_kwh,daily_std_kwh\n";
  const std::size_t per_date = set.dates.empty() ? 0 : set.profiles.size() / set.dates.size();
  for (std::size_t d = 0; d < set.dates.size(); ++d) {
    const auto date_text = format_date(set.dates[d]);
    auto hourly = csv::open_output(dir / fmt::format("profiles_{}.csv", date_text));
    hourly << "household_id,date,hour,mean_kwh,std_kwh\n";
    for (std::size_t k = d * per_date; k < (d + 1) * per_date; ++k) {
      const auto& p = set.profiles[k];
      for (std::size_t w = 0; w < 24; ++w)
        hourly << p.household << ',' << date_text << ',' << w << ',' << csv::format_number(p.hourly_mean[w]) << ','
               << csv::format_number(p.hourly_std[w]) << '\n';
      daily << p.household << ',' << date_text << ',' << csv::format_number(p.daily_mean) << ','
            << csv::format_number(p.daily_std) << '\n';
    }
  }
}

std::vector<DailyRow> load_daily(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  csv::Reader reader(in, path.filename().string());
  const auto c_id = reader.require("household_id");
  const auto c_date = reader.require("date");
  const auto c_mean = reader.require("daily_mean_kwh");
  const auto c_std = reader.column("daily_std_kwh");
  std::vector<DailyRow> rows;
  while (reader.next())
    rows.push_back({reader.integer(c_id), parse_date(reader.text(c_date)), reader.number(c_mean),
                    c_std ? reader.number(*c_std) : 0.0});
  return rows;
}

std::vector<HourlyRow> load_hourly(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  csv::Reader reader(in, path.filename().string());
  const auto c_id = reader.require("household_id");
  const auto c_date = reader.require("date");
  const auto c_hour = reader.require("hour");
  const auto c_mean = reader.require("mean_kwh");
  const auto c_std = reader.column("std_kwh");
  std::vector<HourlyRow> rows;
  while (reader.next())
    rows.push_back({reader.integer(c_id), parse_date(reader.text(c_date)), static_cast<int>(reader.integer(c_hour)),
                    reader.number(c_mean), c_std ? reader.number(*c_std) : 0.0});
  return rows;
}

}  // namespace solartwin
