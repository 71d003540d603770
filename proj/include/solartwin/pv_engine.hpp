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
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "solartwin/core_data.hpp"
#include "solartwin/rng.hpp"
#include "solartwin/solar_geometry.hpp"

namespace solartwin {

enum class BuildingType { Small, Medium };

// Exponential suitability density over candidate areas: rate * exp(-rate * (v - location))
// for v >= location, zero below.
struct ExponentialAreaModel {
  double rate = 0.0;
  double location = 0.0;

  double density(double area) const;
};

struct OrientationWeight {
  double tilt_deg = 0.0;
  Azimuth azimuth = Azimuth::S;
  double weight = 0.0;
};

std::vector<OrientationWeight> default_orientation_table();

struct PvConfig {
  int samples = 20;
  int area_candidates = 100;
  double roof_factor = 1.5;
  double sqft_to_m2 = 0.092903;
  double small_roof_limit_m2 = 464.6;
  double panel_area_m2 = 1.64;
  double yield_min = 0.18;
  double yield_max = 0.22;
  double ratio_min = 0.5;
  double ratio_max = 0.9;
  // (plane count, weight) per building type.
  std::vector<std::pair<int, double>> planes_small = {{1, 0.5}, {2, 0.3}, {3, 0.15}, {4, 0.05}};
  std::vector<std::pair<int, double>> planes_medium = {{1, 0.5}, {2, 0.3}, {3, 0.15}, {4, 0.05}};
  ExponentialAreaModel small_single{0.042, 10.0};
  ExponentialAreaModel small_multi{0.071, 10.0};
  ExponentialAreaModel medium_single{0.002, 300.0};
  ExponentialAreaModel medium_multi{0.046, 10.0};
  std::vector<OrientationWeight> orientations_small = default_orientation_table();
  std::vector<OrientationWeight> orientations_medium = default_orientation_table();
  DegradationTable degradation;

  const ExponentialAreaModel& area_model(BuildingType type, int planes) const;
  void validate() const;
};

// Per-household ensemble of system parameters; index i across the vectors is
// one sampled configuration.
struct TimeInvariantSamples {
  std::int64_t household = 0;
  double lat = 0.0;
  double roof_area_m2 = 0.0;
  BuildingType building_type = BuildingType::Small;
  std::vector<double> area_m2;
  std::vector<double> yield;
  std::vector<double> performance_ratio;
  std::vector<int> planes;
  std::vector<double> tilt_deg;
  std::vector<Azimuth> azimuth;
  // area * yield * performance ratio, per sample.
  std::vector<double> arpr;

  std::size_t size() const noexcept { return arpr.size(); }
};

double roof_area_m2(double sqft, const PvConfig& cfg);
BuildingType building_type_for(double roof_area_m2, const PvConfig& cfg);
// Area rounded down to whole panels.
double snap_to_panels(double area_m2, const PvConfig& cfg);

TimeInvariantSamples sample_time_invariant(const HouseholdRecord& h, const PvConfig& cfg, Rng& rng);
// Uses the household's own stream derived from (seed, id).
TimeInvariantSamples sample_time_invariant(const HouseholdRecord& h, const PvConfig& cfg, std::uint64_t seed);

struct HourlyEnergy {
  double mean_kwh = 0.0;
  double std_kwh = 0.0;
};

// Energy over one hour for every pairing of a system sample (arpr) with a
// tilted-radiation sample (ht), in kWh: mean and population standard deviation
// over the |arpr| x |ht| outer product.
HourlyEnergy hourly_energy(std::span<const double> arpr, std::span<const double> ht);
// Same with a single radiation value shared by every sample.
HourlyEnergy hourly_energy(std::span<const double> arpr, double ht);

struct EnergyProfile {
  std::int64_t household = 0;
  Date date{};
  std::array<double, 24> hourly_mean{};
  std::array<double, 24> hourly_std{};
  double daily_mean = 0.0;
  double daily_std = 0.0;
};

// 24 hourly energies for one household on one day.
EnergyProfile compute_daily_profile(const TimeInvariantSamples& ti, std::span<const double> ghi_day, Date date,
                                    const PvConfig& cfg);

// Dates to generate: date:YYYY-MM-DD, week:YYYY-Www (ISO week), month:YYYY-MM, year:YYYY.
struct Period {
  enum class Kind { Date, Week, Month, Year };
  Kind kind = Kind::Date;
  std::string value;

  static Period parse(std::string_view spec);
  std::vector<Date> dates() const;
  // File-name-safe label, e.g. "week-2020-W26".
  std::string label() const;
};

// Profiles ordered by date, then by household id.
struct ProfileSet {
  std::vector<Date> dates;
  std::vector<EnergyProfile> profiles;
};

// Profiles for every household with solar == true. Households are split into
// contiguous blocks across `workers` threads; the output does not depend on
// the worker count or the input order.
ProfileSet generate_profiles(const HouseholdTable& population, const std::map<std::string, IrradianceSeries>& irradiance,
                             const Period& period, int workers, std::uint64_t seed, const PvConfig& cfg = {});

// Mean daily kWh every household would generate over `dates` (adopter or not).
std::vector<double> potential_daily_generation(const HouseholdTable& population,
                                               const std::map<std::string, IrradianceSeries>& irradiance,
                                               std::span<const Date> dates, int workers, std::uint64_t seed,
                                               const PvConfig& cfg = {});

// profiles_<date>.csv: household_id,date,hour,mean_kwh,std_kwh
// daily_<period>.csv:  household_id,date,daily_mean_kwh,daily_std_kwh
void write_profiles(const std::filesystem::path& dir, const ProfileSet& set, const Period& period);

struct DailyRow {
  std::int64_t household = 0;
  Date date{};
  double mean_kwh = 0.0;
  double std_kwh = 0.0;
};
std::vector<DailyRow> load_daily(const std::filesystem::path& path);

struct HourlyRow {
  std::int64_t household = 0;
  Date date{};
  int hour = 0;
  double mean_kwh = 0.0;
  double std_kwh = 0.0;
};
std::vector<HourlyRow> load_hourly(const std::filesystem::path& path);

}  // namespace solartwin
