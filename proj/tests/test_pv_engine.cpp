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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <vector>

#include "solartwin/pv_engine.hpp"
#include "solartwin/solar_geometry.hpp"
#include "solartwin/toygen.hpp"
#include "support.hpp"

using namespace solartwin;
using solartwin::testing::contains;
using solartwin::testing::error_of;
using solartwin::testing::Gen;
using solartwin::testing::read_text;
using solartwin::testing::TempDir;

namespace {

std::map<std::string, IrradianceSeries> toy_irradiance(const ToyConfig& cfg) {
  std::map<std::string, IrradianceSeries> out;
  for (std::int64_t t = 0; t < cfg.n_tracts; ++t) {
    auto s = gen_irradiance(cfg, t);
    out.emplace(s.tract, std::move(s));
  }
  return out;
}

HouseholdRecord house(double sqft, double lat = 38.0) {
  HouseholdRecord h;
  h.id = 17;
  h.lat = lat;
  h.sqft_value = sqft;
  return h;
}

// Mean and population std over every (i, j) product, as an explicit outer product.
std::pair<double, double> brute_outer(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> e;
  for (double x : a)
    for (double y : b) e.push_back(x * y / 1000.0);
  const double mean = std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());
  double ss = 0.0;
  for (double v : e) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(e.size()))};
}

}  // namespace

TEST_CASE("declination: solstices and equinox") {
  CHECK(std::abs(declination(172) - 23.45) <= 0.05);
  CHECK(std::abs(declination(355) + 23.45) <= 0.05);
  CHECK(std::abs(declination(81)) <= 0.5);
  for (int n = 1; n <= 366; ++n) CHECK(std::abs(declination(n)) <= 23.45);
  CHECK_THROWS_AS(declination(0), DomainError);
  CHECK_THROWS_AS(declination(367), DomainError);
}

TEST_CASE("tilted radiation: reference values") {
  const double expected = 500.0 * std::sin(82.0 * M_PI / 180.0) / std::sin(52.0 * M_PI / 180.0);
  CHECK(expected == doctest::Approx(628.3).epsilon(0.1 / 628.3));
  CHECK(std::abs(tilted_radiation(500, 38, 0, 30, 1.0) - 628.3) <= 0.1);
  Gen g(5);
  for (int i = 0; i < 200; ++i) {
    const double ghi = g.uniform(0, 1100), lat = g.uniform(25, 49), delta = g.uniform(-23.45, 23.45);
    const double d = g.uniform(0.5, 1.0);
    CHECK(tilted_radiation(ghi, lat, delta, 0.0, d) == ghi * d);
    CHECK(tilted_radiation(0.0, lat, delta, g.uniform(0, 89), d) == 0.0);
    CHECK(tilted_radiation(ghi, lat, delta, g.uniform(0, 89), d) >= 0.0);
  }
  // Polar-edge guard: sin(alpha) below 0.01 falls back to ghi * D.
  CHECK(tilted_radiation(300, 89.9, -23.0, 30, 0.9) == doctest::Approx(270.0));
}

TEST_CASE("degradation table and azimuth parsing") {
  DegradationTable d;
  CHECK(d(Azimuth::S) == 1.0);
  CHECK(d(Azimuth::SE) == 0.95);
  CHECK(d(Azimuth::W) == 0.85);
  CHECK(d(Azimuth::NW) == 0.70);
  CHECK(d(Azimuth::N) == 0.55);
  CHECK(parse_azimuth("SW") == Azimuth::SW);
  CHECK_FALSE(parse_azimuth("south").has_value());
}

TEST_CASE("roof area, building type and panel snapping") {
  PvConfig cfg;
  const double sqft = 400.0 / (1.5 * 0.092903);
  CHECK(roof_area_m2(sqft, cfg) == doctest::Approx(400.0));
  CHECK(building_type_for(400.0, cfg) == BuildingType::Small);
  CHECK(building_type_for(464.6, cfg) == BuildingType::Small);
  CHECK(building_type_for(464.7, cfg) == BuildingType::Medium);
  CHECK(snap_to_panels(10.0, cfg) == doctest::Approx(9.84));
  CHECK(snap_to_panels(1.0, cfg) == 0.0);
  Gen g(2);
  for (int i = 0; i < 100; ++i) {
    const double s = g.uniform(200, 8000);
    CHECK(roof_area_m2(s, cfg) == 1.5 * (s * 0.092903));
  }
}

TEST_CASE("exponential area density is zero below its location") {
  ExponentialAreaModel m{0.042, 10.0};
  CHECK(m.density(5.0) == 0.0);
  CHECK(m.density(10.0) == doctest::Approx(0.042));
  CHECK(m.density(20.0) == doctest::Approx(0.042 * std::exp(-0.42)));
}

TEST_CASE("time-invariant samples respect their bounds") {
  PvConfig cfg;
  Gen g(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = house(g.uniform(300, 8000));
    const auto ti = sample_time_invariant(h, cfg, g.u64());
    REQUIRE(ti.size() == 20u);
    for (std::size_t i = 0; i < ti.size(); ++i) {
      const double panels = ti.area_m2[i] / 1.64;
      CHECK(std::abs(panels - std::round(panels)) < 1e-9);
      CHECK(ti.area_m2[i] <= ti.roof_area_m2);
      CHECK(ti.yield[i] >= 0.18);
      CHECK(ti.yield[i] <= 0.22);
      CHECK(ti.performance_ratio[i] >= 0.5);
      CHECK(ti.performance_ratio[i] <= 0.9);
      CHECK(ti.tilt_deg[i] >= 0.0);
      CHECK(ti.tilt_deg[i] < 90.0);
      CHECK(ti.planes[i] >= 1);
      CHECK(ti.planes[i] <= 4);
      CHECK(ti.arpr[i] == ti.area_m2[i] * ti.yield[i] * ti.performance_ratio[i]);
    }
  }
  auto bare = house(1000);
  bare.sqft_value.reset();
  CHECK(contains(error_of([&] { sample_time_invariant(bare, cfg, std::uint64_t{1}); }), "no sqft_value"));
}

TEST_CASE("hourly energy: examples") {
  const std::vector<double> single = {9.84 * 0.2 * 0.8};
  const auto e = hourly_energy(single, 500.0);
  CHECK(e.mean_kwh == doctest::Approx(0.7872));
  CHECK(e.std_kwh == 0.0);
  const std::vector<double> ht = {500.0};
  CHECK(hourly_energy(single, ht).mean_kwh == doctest::Approx(0.7872));

  const std::vector<double> arpr = {1.0, 2.0, 3.0};
  const auto zero = hourly_energy(arpr, 0.0);
  CHECK(zero.mean_kwh == 0.0);
  CHECK(zero.std_kwh == 0.0);
  const std::vector<double> same = {1.5, 1.5, 1.5, 1.5};
  CHECK(hourly_energy(same, 700.0).std_kwh == 0.0);
}

TEST_CASE("hourly energy: moments match the explicit outer product") {
  Gen g(9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(static_cast<std::size_t>(g.integer(1, 30)));
    std::vector<double> b(static_cast<std::size_t>(g.integer(1, 30)));
    for (auto& x : a) x = g.uniform(0, 40);
    for (auto& x : b) x = g.uniform(0, 1200);
    const auto [mean, sd] = brute_outer(a, b);
    const auto e = hourly_energy(a, b);
    CHECK(e.mean_kwh == doctest::Approx(mean).epsilon(1e-10));
    CHECK(e.std_kwh == doctest::Approx(sd).epsilon(1e-7).scale(1e-6));
  }
}

TEST_CASE("daily profile: aggregation identities and night hours") {
  PvConfig cfg;
  const auto ti = sample_time_invariant(house(2200), cfg, std::uint64_t{3});
  std::vector<double> ghi(24, 0.0);
  for (int w = 6; w <= 18; ++w) ghi[static_cast<std::size_t>(w)] = 900.0 * std::sin(M_PI * (w - 5.5) / 13.0);
  const Date date{std::chrono::year{2020} / 6 / 21};
  const auto p = compute_daily_profile(ti, ghi, date, cfg);
  double sum = 0.0, ss = 0.0;
  for (std::size_t w = 0; w < 24; ++w) {
    CHECK(p.hourly_mean[w] >= 0.0);
    CHECK(p.hourly_std[w] >= 0.0);
    if (ghi[w] == 0.0) {
      CHECK(p.hourly_mean[w] == 0.0);
      CHECK(p.hourly_std[w] == 0.0);
    }
    sum += p.hourly_mean[w];
    ss += p.hourly_std[w] * p.hourly_std[w];
  }
  CHECK(p.daily_mean == doctest::Approx(sum).epsilon(1e-12));
  CHECK(p.daily_std * p.daily_std == doctest::Approx(ss).epsilon(1e-9));

  std::vector<double> doubled = ghi;
  for (auto& v : doubled) v *= 2;
  const auto q = compute_daily_profile(ti, doubled, date, cfg);
  for (std::size_t w = 0; w < 24; ++w) CHECK(q.hourly_mean[w] == doctest::Approx(2 * p.hourly_mean[w]).epsilon(1e-12));

  // A constant GHI over all 24 hours gives equal hourly stds s, so daily std = s * sqrt(24).
  const std::vector<double> flat(24, 400.0);
  const auto f = compute_daily_profile(ti, flat, date, cfg);
  CHECK(f.daily_std == doctest::Approx(f.hourly_std[0] * std::sqrt(24.0)).epsilon(1e-12));

  CHECK_THROWS_AS(compute_daily_profile(ti, std::vector<double>(23, 1.0), date, cfg), DomainError);
}

TEST_CASE("period parsing") {
  const auto w = Period::parse("week:2020-W26");
  const auto d = w.dates();
  REQUIRE(d.size() == 7u);
  CHECK(format_date(d.front()) == "2020-06-22");
  CHECK(format_date(d.back()) == "2020-06-28");
  CHECK(w.label() == "week-2020-W26");
  CHECK(Period::parse("month:2020-02").dates().size() == 29u);
  CHECK(Period::parse("year:2021").dates().size() == 365u);
  CHECK(Period::parse("date:2020-03-01").dates().size() == 1u);
  CHECK(format_date(Period::parse("week:2021-W01").dates().front()) == "2021-01-04");
  CHECK_THROWS_AS(Period::parse("fortnight:2020"), ConfigError);
  CHECK_THROWS_AS(Period::parse("week:2021-W53"), ConfigError);
  CHECK_THROWS_AS(Period::parse("month:2020-13"), ConfigError);
}

TEST_CASE("profiles: worker count and input order do not change the output") {
  ToyConfig cfg;
  cfg.n_households = 300;
  cfg.days = 14;
  cfg.start_date = Date{std::chrono::year{2020} / 6 / 15};
  const auto pop = gen_population(cfg);
  const auto irr = toy_irradiance(cfg);
  const auto period = Period::parse("week:2020-W26");

  TempDir tmp("pv");
  std::vector<std::string> dailies;
  for (int workers : {1, 2, 8}) {
    const auto set = generate_profiles(pop, irr, period, workers, 11);
    const auto dir = tmp / ("w" + std::to_string(workers));
    write_profiles(dir, set, period);
    dailies.push_back(read_text(dir / "daily_week-2020-W26.csv") + read_text(dir / "profiles_2020-06-24.csv"));
  }
  CHECK(dailies[0] == dailies[1]);
  CHECK(dailies[0] == dailies[2]);

  auto reversed = pop;
  std::reverse(reversed.begin(), reversed.end());
  const auto a = generate_profiles(pop, irr, period, 3, 11);
  const auto b = generate_profiles(reversed, irr, period, 3, 11);
  REQUIRE(a.profiles.size() == b.profiles.size());
  for (std::size_t i = 0; i < a.profiles.size(); ++i) {
    CHECK(a.profiles[i].household == b.profiles[i].household);
    CHECK(a.profiles[i].daily_mean == b.profiles[i].daily_mean);
  }
  std::size_t adopters = 0;
  for (const auto& h : pop) adopters += h.solar.value_or(false) ? 1 : 0;
  CHECK(a.profiles.size() == adopters * 7);
}

TEST_CASE("profiles: files round trip through the loaders") {
  ToyConfig cfg;
  cfg.n_households = 100;
  cfg.days = 3;
  const auto pop = gen_population(cfg);
  const auto period = Period::parse("date:2020-01-02");
  const auto set = generate_profiles(pop, toy_irradiance(cfg), period, 1, 1);
  TempDir tmp("pvio");
  write_profiles(tmp.path(), set, period);
  const auto daily = load_daily(tmp / "daily_date-2020-01-02.csv");
  REQUIRE(daily.size() == set.profiles.size());
  CHECK(daily[0].household == set.profiles[0].household);
  CHECK(daily[0].mean_kwh == doctest::Approx(set.profiles[0].daily_mean).epsilon(1e-12));
  const auto hourly = load_hourly(tmp / "profiles_2020-01-02.csv");
  CHECK(hourly.size() == set.profiles.size() * 24);
}

TEST_CASE("profiles: missing irradiance names tract and date") {
  ToyConfig cfg;
  cfg.n_households = 50;
  cfg.days = 3;
  const auto pop = gen_population(cfg);
  auto irr = toy_irradiance(cfg);
  const auto late = Period::parse("date:2020-02-01");
  CHECK(contains(error_of([&] { generate_profiles(pop, irr, late, 1, 1); }), "2020-02-01"));
  std::string tract;
  for (const auto& h : pop)
    if (h.solar.value_or(false)) tract = h.tract;
  irr.erase(tract);
  CHECK(contains(error_of([&] { generate_profiles(pop, irr, Period::parse("date:2020-01-02"), 1, 1); }),
                 "tract " + tract));
}

TEST_CASE("profiles: summer outproduces winter at toy latitudes") {
  ToyConfig cfg;
  cfg.n_households = 150;
  cfg.days = 366;
  const auto pop = gen_population(cfg);
  const auto irr = toy_irradiance(cfg);
  const auto year = generate_profiles(pop, irr, Period::parse("year:2020"), 4, 5);
  std::map<std::int64_t, std::pair<double, double>> seasons;
  for (const auto& p : year.profiles) {
    const unsigned m = static_cast<unsigned>(std::chrono::year_month_day{p.date}.month());
    if (m >= 6 && m <= 8) seasons[p.household].first += p.daily_mean;
    if (m == 12 || m <= 2) seasons[p.household].second += p.daily_mean;
  }
  REQUIRE_FALSE(seasons.empty());
  for (const auto& [id, s] : seasons) CHECK(s.first > s.second);
}
