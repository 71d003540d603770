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

#include "solartwin/toygen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "solartwin/error.hpp"
#include "solartwin/rng.hpp"
#include "solartwin/solar_geometry.hpp"
#include "solartwin/sqft.hpp"

namespace solartwin {

namespace {

enum StreamKey : std::uint64_t { kAdopters = 1, kHousehold, kTract, kLmi, kIrradiance, kNetwork };

// Direction in [-1, 1] along which adopters' marginal for each feature is tilted.
double propensity(Feature f, int code, const CodeRange& dom) {
  const double pos = dom.size() > 1 ? static_cast<double>(code - dom.min) / (dom.size() - 1) : 0.0;
  switch (f) {
    case Feature::MONEYPY:
    case Feature::YEARMADERANGE:
    case Feature::BEDROOMS:
      return 2.0 * pos - 1.0;
    case Feature::KOWNRENT:
      return code == 1 ? 1.0 : -1.0;
    case Feature::TYPEHUQ:
      return code == 2 ? 1.0 : -0.5;
    case Feature::NHSLDMEM:
      return code >= 2 && code <= 5 ? 0.5 : -0.5;
    case Feature::FUELHEAT:
      return code == 4 ? 0.5 : 0.0;
    case Feature::BA_climate:
      return 0.5 * (2.0 * pos - 1.0);
  }
  return 0.0;
}

int draw_code(Rng& rng, Feature f, const CodeRange& dom, double shift) {
  std::vector<double> weights(static_cast<std::size_t>(dom.size()));
  for (int c = dom.min; c <= dom.max; ++c)
    weights[static_cast<std::size_t>(c - dom.min)] = std::exp(shift * propensity(f, c, dom));
  return dom.min + static_cast<int>(rng.weighted_index(weights));
}

}  // namespace

void ToyConfig::validate() const {
  if (n_households <= 0) throw ConfigError("toygen: n_households must be > 0");
  if (n_tracts <= 0) throw ConfigError("toygen: n_tracts must be > 0");
  if (n_tracts > n_households) throw ConfigError("toygen: n_tracts must not exceed n_households");
  if (!(adopter_fraction >= 0.0 && adopter_fraction <= 1.0)) throw ConfigError("toygen: adopter_fraction outside [0,1]");
  if (!(lmi_fraction >= 0.0 && lmi_fraction <= 1.0)) throw ConfigError("toygen: lmi_fraction outside [0,1]");
  if (!(rural_fraction >= 0.0 && rural_fraction <= 1.0)) throw ConfigError("toygen: rural_fraction outside [0,1]");
  if (days <= 0) throw ConfigError("toygen: days must be > 0");
  if (!(latitude_band.first <= latitude_band.second) || latitude_band.first < -66.0 || latitude_band.second > 66.0)
    throw ConfigError("toygen: latitude band must be ordered and within +/-66 degrees");
  if (!(cloud_min > 0.0 && cloud_min <= 1.0)) throw ConfigError("toygen: cloud_min outside (0,1]");
}

std::string toy_county_fips(const ToyConfig& cfg, std::int64_t tract_index) {
  return fmt::format("{}{:03d}", cfg.state_fips, 2 * (tract_index / 3) + 1);
}

std::string toy_tract_fips(const ToyConfig& cfg, std::int64_t tract_index) {
  return fmt::format("{}{:06d}", toy_county_fips(cfg, tract_index), (tract_index + 1) * 100);
}

double toy_tract_latitude(const ToyConfig& cfg, std::int64_t tract_index) {
  const auto [lo, hi] = cfg.latitude_band;
  return lo + (static_cast<double>(tract_index) + 0.5) / static_cast<double>(cfg.n_tracts) * (hi - lo);
}

HouseholdTable gen_population(const ToyConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_households);

  std::vector<char> adopter(n, 0);
  {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(cfg.seed, kAdopters));
    rng.shuffle(std::span(order));
    const auto k = static_cast<std::size_t>(std::llround(static_cast<double>(n) * cfg.adopter_fraction));
    for (std::size_t i = 0; i < k; ++i) adopter[order[i]] = 1;
  }

  std::vector<char> tract_rural(static_cast<std::size_t>(cfg.n_tracts));
  for (std::int64_t t = 0; t < cfg.n_tracts; ++t) {
    Rng rng(derive_seed(cfg.seed, kTract, static_cast<std::uint64_t>(t)));
    tract_rural[static_cast<std::size_t>(t)] = rng.bernoulli(cfg.rural_fraction) ? 1 : 0;
  }

  const SqftClasses classes;
  HouseholdTable table(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(cfg.seed, kHousehold, i));
    auto& h = table[i];
    const auto t = static_cast<std::int64_t>(i * static_cast<std::size_t>(cfg.n_tracts) / n);
    h.id = static_cast<std::int64_t>(i) + 1;
    h.state = cfg.state;
    h.county = toy_county_fips(cfg, t);
    h.tract = toy_tract_fips(cfg, t);
    h.lat = toy_tract_latitude(cfg, t) + rng.uniform(-0.05, 0.05);
    h.lon = -79.5 + 3.0 * (static_cast<double>(t) + 0.5) / static_cast<double>(cfg.n_tracts) + rng.uniform(-0.05, 0.05);

    const double shift = adopter[i] ? cfg.signal_shift : 0.0;
    for (std::size_t f = 0; f < kFeatureCount; ++f)
      h.features[f] = draw_code(rng, static_cast<Feature>(f), cfg.schema.domains[f], shift);

    const auto& bed = cfg.schema[Feature::BEDROOMS];
    const double latent = 7.0 * (h.feature(Feature::BEDROOMS) - bed.min) / std::max(1, bed.size() - 1) +
                          (h.feature(Feature::TYPEHUQ) == 2 ? 0.8 : -0.4) + rng.uniform(-1.5, 1.5);
    const int cls = std::clamp(static_cast<int>(std::lround(latent)), 0, kSqftClassCount - 1);
    h.sqft_class = cls;
    auto [lo, hi] = classes.range(cls);
    if (cls == kSqftClassCount - 1) hi = std::min(hi, 6000.0);
    h.sqft_value = rng.uniform(lo, hi);

    h.solar = adopter[i] != 0;
    h.rural = tract_rural[static_cast<std::size_t>(t)] != 0;
  }

  // LMI: the round(n * lmi_fraction) lowest-income households, random tie-break.
  {
    Rng rng(derive_seed(cfg.seed, kLmi));
    std::vector<std::pair<double, std::size_t>> keyed(n);
    for (std::size_t i = 0; i < n; ++i)
      keyed[i] = {table[i].feature(Feature::MONEYPY) + rng.uniform(), i};
    std::ranges::sort(keyed);
    const auto k = static_cast<std::size_t>(std::llround(static_cast<double>(n) * cfg.lmi_fraction));
    for (std::size_t r = 0; r < n; ++r) table[keyed[r].second].lmi = r < k;
  }
  return table;
}

ToyDay toy_day(const ToyConfig& cfg, std::int64_t tract_index, Date date) {
  const double lat = toy_tract_latitude(cfg, tract_index);
  const double delta = declination(day_of_year(date));
  const double cos_ws = std::clamp(-std::tan(deg2rad(lat)) * std::tan(deg2rad(delta)), -1.0, 1.0);
  const double day_length = 2.0 * std::acos(cos_ws) * 180.0 / std::numbers::pi / 15.0;
  const double elevation_sine = std::max(0.0, std::cos(deg2rad(lat - delta)));

  const auto day_index = static_cast<std::uint64_t>((date - cfg.start_date).count());
  Rng rng(derive_seed(cfg.seed, kIrradiance, static_cast<std::uint64_t>(tract_index), day_index));
  const double clearness = rng.uniform(cfg.cloud_min, 1.0);
  return {12.0 - day_length / 2.0, 12.0 + day_length / 2.0, cfg.peak_ghi * elevation_sine * clearness};
}

IrradianceSeries gen_irradiance(const ToyConfig& cfg, std::int64_t tract_index) {
  cfg.validate();
  if (tract_index < 0 || tract_index >= cfg.n_tracts)
    throw ConfigError(fmt::format("toygen: tract index {} outside [0, {})", tract_index, cfg.n_tracts));
  IrradianceSeries s;
  s.tract = toy_tract_fips(cfg, tract_index);
  s.start_date = cfg.start_date;
  s.ghi.reserve(static_cast<std::size_t>(cfg.days) * 24);
  for (std::int64_t d = 0; d < cfg.days; ++d) {
    const Date date = cfg.start_date + std::chrono::days(d);
    const auto day = toy_day(cfg, tract_index, date);
    for (int w = 0; w < 24; ++w) {
      double ghi = 0.0;
      if (w > day.sunrise && w < day.sunset && day.sunset > day.sunrise)
        ghi = std::max(0.0, day.peak * std::sin(std::numbers::pi * (w - day.sunrise) / (day.sunset - day.sunrise)));
      s.ghi.push_back(ghi);
    }
  }
  return s;
}

Graph gen_network(std::size_t n, double edge_prob, std::size_t groups, std::uint64_t seed) {
  if (n == 0) throw ConfigError("gen_network: n must be > 0");
  if (groups < 1) throw ConfigError("gen_network: groups must be >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw ConfigError("gen_network: edge_prob outside [0,1]");
  groups = std::min(groups, n);
  Rng rng(derive_seed(seed, kNetwork));
  Graph g;
  g.node_count = n;
  for (std::size_t k = 0; k < groups; ++k) {
    const std::size_t begin = n * k / groups;
    const std::size_t end = n * (k + 1) / groups;
    for (std::size_t u = begin; u < end; ++u)
      for (std::size_t v = u + 1; v < end; ++v)
        if (rng.uniform() < edge_prob) g.edges.emplace_back(u, v);
  }
  return g;
}

}  // namespace solartwin
