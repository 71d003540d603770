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
#include <string>
#include <utility>

#include "solartwin/core_data.hpp"

namespace solartwin {

// Synthetic stand-in data: a household population with planted labels, clear-sky
// irradiance per tract, and a workplace-style contact network.
struct ToyConfig {
  std::int64_t n_households = 2000;
  std::int64_t n_tracts = 10;
  double adopter_fraction = 0.1;
  double lmi_fraction = 0.3;
  double rural_fraction = 0.25;
  std::uint64_t seed = 42;
  std::int64_t days = 366;
  Date start_date = Date{std::chrono::year{2020} / std::chrono::January / 1};
  std::pair<double, double> latitude_band = {36.5, 39.5};
  // Log-odds shift applied to adopters' categorical marginals.
  double signal_shift = 1.5;
  double peak_ghi = 1000.0;
  // Daily clearness factor is drawn uniformly from [cloud_min, 1].
  double cloud_min = 0.75;
  std::string state = "VA";
  std::string state_fips = "51";
  FeatureSchema schema;

  void validate() const;
};

std::string toy_county_fips(const ToyConfig& cfg, std::int64_t tract_index);
std::string toy_tract_fips(const ToyConfig& cfg, std::int64_t tract_index);
double toy_tract_latitude(const ToyConfig& cfg, std::int64_t tract_index);

// n_households records with planted solar, sqft_class, sqft_value, lmi and
// rural labels. Exactly round(n * adopter_fraction) adopters.
HouseholdTable gen_population(const ToyConfig& cfg);

// Sunrise/sunset (hours) and peak GHI for one tract-day of the toy model.
struct ToyDay {
  double sunrise = 0.0;
  double sunset = 0.0;
  double peak = 0.0;
};
ToyDay toy_day(const ToyConfig& cfg, std::int64_t tract_index, Date date);

// Half-sine diurnal GHI between sunrise and sunset, cfg.days days from
// cfg.start_date; peak scaled by noon solar elevation and a daily clearness draw.
IrradianceSeries gen_irradiance(const ToyConfig& cfg, std::int64_t tract_index);

// Nodes split into `groups` contiguous blocks; each within-block pair is joined
// independently with probability edge_prob.
Graph gen_network(std::size_t n, double edge_prob, std::size_t groups, std::uint64_t seed);

}  // namespace solartwin
