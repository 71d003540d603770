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
#include <numbers>
#include <optional>
#include <string_view>

namespace solartwin {

// Compass sector a roof plane faces.
enum class Azimuth { N, NE, E, SE, S, SW, W, NW };

inline constexpr std::array<std::string_view, 8> kAzimuthNames = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};

std::optional<Azimuth> parse_azimuth(std::string_view name);

// Output fraction retained by a plane facing each sector, indexed by Azimuth.
struct DegradationTable {
  std::array<double, 8> factor = {0.55, 0.70, 0.85, 0.95, 1.00, 0.95, 0.85, 0.70};

  double operator()(Azimuth a) const { return factor[static_cast<std::size_t>(a)]; }
};

constexpr double deg2rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }

// Cooper's formula, degrees. day_of_year in [1, 366].
double declination(int day_of_year);

// Below this sine of the solar-elevation proxy the tilt ratio blows up, so the
// tilted radiation falls back to ghi * D.
inline constexpr double kMinElevationSine = 0.01;

// Multiplier taking GHI to radiation on a plane with tilt `tilt_deg` at
// latitude `lat_deg` when the declination is `delta_deg`:
//   sin(alpha + tilt) / sin(alpha) * D,   alpha = 90 - lat + delta,
// clamped at zero.
double tilt_gain(double lat_deg, double delta_deg, double tilt_deg, double degradation);

// Radiation on the tilted plane, W/m^2.
double tilted_radiation(double ghi, double lat_deg, double delta_deg, double tilt_deg, double degradation);

}  // namespace solartwin
