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

#include "solartwin/solar_geometry.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "solartwin/error.hpp"

namespace solartwin {

std::optional<Azimuth> parse_azimuth(std::string_view name) {
  for (std::size_t i = 0; i < kAzimuthNames.size(); ++i)
    if (kAzimuthNames[i] == name) return static_cast<Azimuth>(i);
  return std::nullopt;
}

double declination(int day_of_year) {
  if (day_of_year < 1 || day_of_year > 366) throw DomainError(fmt::format("day of year {} outside [1, 366]", day_of_year));
  return 23.45 * std::sin(2.0 * std::numbers::pi * (284.0 + day_of_year) / 365.0);
}

double tilt_gain(double lat_deg, double delta_deg, double tilt_deg, double degradation) {
  const double alpha = 90.0 - lat_deg + delta_deg;
  const double s = std::sin(deg2rad(alpha));
  if (s <= kMinElevationSine) return degradation;
  const double ratio = std::sin(deg2rad(alpha + tilt_deg)) / s;
  return std::max(0.0, ratio) * degradation;
}

double tilted_radiation(double ghi, double lat_deg, double delta_deg, double tilt_deg, double degradation) {
  return ghi * tilt_gain(lat_deg, delta_deg, tilt_deg, degradation);
}

}  // namespace solartwin
