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

#include <optional>
#include <string_view>

#include "solartwin/config.hpp"

namespace solartwin {

// One function per CLI stage. Each reads its upstream artifacts from the paths
// in `cfg`, writes its outputs under cfg.out_dir (toygen writes under
// cfg.data_dir) and throws solartwin::Error on failure.

// what: population | irradiance | network | all
void cmd_toygen(const RunConfig& cfg, std::string_view what = "all");
// what: smoten | corr
void cmd_preprocess(const RunConfig& cfg, std::string_view what);
void cmd_classify_sqft(const RunConfig& cfg);
void cmd_estimate_sqft(const RunConfig& cfg);
void cmd_calibrate(const RunConfig& cfg);
// With `reference`, profiles for the ground-truth population go to
// cfg.reference_dir under a seed derived from cfg.seed.
void cmd_generate(const RunConfig& cfg, bool reference = false);
void cmd_validate(const RunConfig& cfg);
void cmd_simulate(const RunConfig& cfg, std::optional<PolicyCase> only = std::nullopt);
// Every stage above in order.
void cmd_pipeline(const RunConfig& cfg);

// Output file names under cfg.out_dir.
namespace artifacts {
inline constexpr std::string_view kBalancedSqft = "sqft_train_balanced.csv";
inline constexpr std::string_view kCramersOriginal = "cramers_v_original.csv";
inline constexpr std::string_view kCramersBalanced = "cramers_v_balanced.csv";
inline constexpr std::string_view kPopulationSqftClass = "population_sqft_class.csv";
inline constexpr std::string_view kPopulationSqft = "population_sqft.csv";
inline constexpr std::string_view kPopulationSolar = "population_solar.csv";
inline constexpr std::string_view kTrace = "calibration_trace.csv";
inline constexpr std::string_view kModel = "adoption_model.txt";
inline constexpr std::string_view kProfilesDir = "profiles";
inline constexpr std::string_view kMetrics = "metrics.csv";
inline constexpr std::string_view kTimeline = "adoption_timeline.csv";
}  // namespace artifacts

}  // namespace solartwin
