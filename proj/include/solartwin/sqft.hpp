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
#include <span>
#include <utility>
#include <vector>

#include "solartwin/core_data.hpp"
#include "solartwin/rng.hpp"

namespace solartwin {

inline constexpr int kSqftClassCount = 8;

// Square-footage class boundaries in ft^2. Class c covers [bounds[c], bounds[c+1]).
// The lowest class has a nominal floor and the open-ended top class (>= 4000)
// is capped so uniform sampling has a finite support.
struct SqftClasses {
  std::array<double, kSqftClassCount + 1> bounds = {200, 600, 1000, 1500, 2000, 2500, 3000, 4000, 8000};

  std::pair<double, double> range(int cls) const;
  // Class index for a value; values beyond the cap fall in the top class.
  int classify(double sqft) const;
};

struct SubclassInterval {
  double low = 0.0;
  double high = 0.0;
};

// Contiguous sub-intervals that tile a class range, each weighted by how often
// survey households fall inside it.
struct SubclassWeights {
  double range_low = 0.0;
  double range_high = 0.0;
  std::vector<SubclassInterval> intervals;
  std::vector<double> weights;

  // Throws DomainError if the intervals do not tile the range or the weights
  // are negative or do not sum to one.
  void validate() const;
};

// k equal-width sub-intervals of [low, high); weight proportional to the number
// of survey values in each. With `uniform_fallback` an empty range yields equal
// weights instead of an error.
SubclassWeights subclass_weights(std::span<const double> survey, std::pair<double, double> class_range, int k,
                                 bool uniform_fallback = false);

// Draw `subclass_draws` sub-intervals by weight (with replacement), then
// `uniform_draws` uniform values from each; return the mean of all values.
double estimate_sqft(const SubclassWeights& w, int subclass_draws, int uniform_draws, Rng& rng);
double estimate_sqft(const SubclassWeights& w, int subclass_draws, int uniform_draws, std::uint64_t seed);

struct SqftEstimateConfig {
  SqftClasses classes;
  int subclasses = 5;
  int subclass_draws = 10;
  int uniform_draws = 10;
  bool uniform_fallback = true;
};

// Per-class weights learned from surveyed households (those carrying both
// sqft_class and sqft_value).
std::vector<SubclassWeights> fit_subclass_weights(const HouseholdTable& survey, const SqftEstimateConfig& cfg);

// Fills sqft_value for every household from its sqft_class. Each household uses
// its own stream derived from (seed, id), so the result is order-independent.
HouseholdTable estimate_population_sqft(const HouseholdTable& population, std::span<const SubclassWeights> weights,
                                        const SqftEstimateConfig& cfg, std::uint64_t seed);

}  // namespace solartwin
