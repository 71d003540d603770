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

#include "solartwin/sqft.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "solartwin/error.hpp"

namespace solartwin {

std::pair<double, double> SqftClasses::range(int cls) const {
  if (cls < 0 || cls >= kSqftClassCount) throw DomainError(fmt::format("sqft class {} outside [0, 7]", cls));
  return {bounds[static_cast<std::size_t>(cls)], bounds[static_cast<std::size_t>(cls) + 1]};
}

int SqftClasses::classify(double sqft) const {
  for (int c = kSqftClassCount - 1; c > 0; --c)
    if (sqft >= bounds[static_cast<std::size_t>(c)]) return c;
  return 0;
}

void SubclassWeights::validate() const {
  if (intervals.empty() || intervals.size() != weights.size())
    throw DomainError("subclass weights: interval and weight counts differ");
  if (intervals.front().low != range_low || intervals.back().high != range_high)
    throw DomainError("subclass weights: intervals do not span the class range");
  for (std::size_t i = 1; i < intervals.size(); ++i)
    if (intervals[i].low != intervals[i - 1].high) throw DomainError("subclass weights: intervals are not contiguous");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("subclass weights: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError(fmt::format("subclass weights sum to {}, expected 1", total));
}

SubclassWeights subclass_weights(std::span<const double> survey, std::pair<double, double> class_range, int k,
                                 bool uniform_fallback) {
  if (k < 1) throw DomainError("subclass count must be >= 1");
  const auto [low, high] = class_range;
  if (!(high > low)) throw DomainError(fmt::format("empty class range [{}, {})", low, high));

  SubclassWeights w;
  w.range_low = low;
  w.range_high = high;
  const double width = (high - low) / k;
  for (int j = 0; j < k; ++j) {
    const double lo = low + j * width;
    const double hi = j + 1 == k ? high : low + (j + 1) * width;
    w.intervals.push_back({lo, hi});
  }

  std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
  double inside = 0.0;
  for (double v : survey) {
    if (!(v >= low && v < high)) continue;
    auto j = static_cast<std::size_t>((v - low) / width);
    j = std::min(j, static_cast<std::size_t>(k - 1));
    // Floating-point edge: keep v inside its interval's closed-open bounds.
    while (j > 0 && v < w.intervals[j].low) --j;
    while (j + 1 < counts.size() && v >= w.intervals[j].high) ++j;
    counts[j] += 1.0;
    inside += 1.0;
  }
  if (inside == 0.0) {
    if (!uniform_fallback)
      throw DomainError(fmt::format("no survey values inside [{}, {}); enable the uniform fallback", low, high));
    w.weights.assign(static_cast<std::size_t>(k), 1.0 / k);
    return w;
  }
  for (double c : counts) w.weights.push_back(c / inside);
  return w;
}

double estimate_sqft(const SubclassWeights& w, int subclass_draws, int uniform_draws, Rng& rng) {
  if (subclass_draws < 1 || uniform_draws < 1) throw DomainError("estimate_sqft: draw counts must be >= 1");
  double sum = 0.0;
  for (int m = 0; m < subclass_draws; ++m) {
    const auto& iv = w.intervals[rng.weighted_index(w.weights)];
    for (int l = 0; l < uniform_draws; ++l) sum += rng.uniform(iv.low, iv.high);
  }
  const double mean = sum / (static_cast<double>(subclass_draws) * uniform_draws);
  return std::clamp(mean, w.range_low, w.range_high);
}

double estimate_sqft(const SubclassWeights& w, int subclass_draws, int uniform_draws, std::uint64_t seed) {
  Rng rng(seed);
  return estimate_sqft(w, subclass_draws, uniform_draws, rng);
}

std::vector<SubclassWeights> fit_subclass_weights(const HouseholdTable& survey, const SqftEstimateConfig& cfg) {
  std::vector<std::vector<double>> by_class(kSqftClassCount);
  for (const auto& h : survey)
    if (h.sqft_class && h.sqft_value) by_class[static_cast<std::size_t>(*h.sqft_class)].push_back(*h.sqft_value);
  std::vector<SubclassWeights> out;
  for (int c = 0; c < kSqftClassCount; ++c)
    out.push_back(subclass_weights(by_class[static_cast<std::size_t>(c)], cfg.classes.range(c), cfg.subclasses,
                                   cfg.uniform_fallback));
  return out;
}

HouseholdTable estimate_population_sqft(const HouseholdTable& population, std::span<const SubclassWeights> weights,
                                        const SqftEstimateConfig& cfg, std::uint64_t seed) {
  if (weights.size() != static_cast<std::size_t>(kSqftClassCount))
    throw DomainError("estimate_population_sqft: expected one weight set per class");
  HouseholdTable out = population;
  for (auto& h : out) {
    if (!h.sqft_class) throw DomainError(fmt::format("household {} has no sqft_class", h.id));
    h.sqft_value = estimate_sqft(weights[static_cast<std::size_t>(*h.sqft_class)], cfg.subclass_draws,
                                 cfg.uniform_draws, derive_seed(seed, static_cast<std::uint64_t>(h.id)));
  }
  return out;
}

}  // namespace solartwin
