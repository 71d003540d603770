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
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "solartwin/calibrate.hpp"
#include "solartwin/diffusion.hpp"
#include "solartwin/ensemble.hpp"
#include "solartwin/preprocess.hpp"
#include "solartwin/pv_engine.hpp"
#include "solartwin/sqft.hpp"
#include "solartwin/toygen.hpp"

namespace solartwin {

// Everything a pipeline run needs. Defaults reproduce the toy setup; see the
// README for the file format.
struct RunConfig {
  std::uint64_t seed = 42;
  int workers = 1;

  // Input locations. When a config file is loaded, relative paths and the
  // data/out defaults resolve against the file's directory.
  std::filesystem::path data_dir = "data";
  std::filesystem::path out_dir = "out";
  std::filesystem::path survey;          // default <data_dir>/survey.csv
  std::filesystem::path population;      // default <data_dir>/population.csv
  std::filesystem::path truth;           // default <data_dir>/population_truth.csv
  std::filesystem::path targets;         // default <data_dir>/targets.csv
  std::filesystem::path irradiance_dir;  // default <data_dir>/irradiance
  std::filesystem::path network;         // default <data_dir>/network.edges
  std::filesystem::path reference_dir;   // default <out_dir>/reference

  ToyConfig toy;
  double network_edge_prob = 0.05;
  std::size_t network_groups = 20;

  bool oversample = true;
  OversampleMethod oversample_method = OversampleMethod::Smoten;
  int smoten_k = 5;

  SqftEnsembleConfig ensemble;
  SqftEstimateConfig sqft;
  CalibrationOptions calibration;

  Period period{Period::Kind::Week, "2020-W26"};
  PvConfig pv;

  DiffusionConfig diffusion;
  std::vector<PolicyCase> cases{kAllPolicyCases.begin(), kAllPolicyCases.end()};

  int histogram_bins = 50;
  int kde_grid = 512;

  // Fills unset paths from data_dir/out_dir and validates every section.
  void finalize();
};

// Line-oriented INI: "[section]" headers, "key = value" lines, ';' or '#'
// comments. Unknown sections or keys are rejected.
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {},
                       std::string_view source = "config");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace solartwin
