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
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace solartwin {

// Binned probability mass: mass[i] covers [bin_edges[i], bin_edges[i + 1]).
struct DiscreteDistribution {
  std::vector<double> bin_edges;
  std::vector<double> mass;

  // Throws DomainError unless edges ascend, mass >= 0 and sums to 1 within 1e-9.
  void validate() const;
};

// Unit-width bins 0..n with the given mass, for quick construction.
DiscreteDistribution make_distribution(std::vector<double> mass);

// Base-2 Kullback-Leibler divergence. Returns +infinity when p has mass where q
// has none. Throws DomainError on mismatched bin edges.
double kld(const DiscreteDistribution& p, const DiscreteDistribution& q);

// Base-2 Jensen-Shannon divergence, in [0, 1].
double jsd(const DiscreteDistribution& p, const DiscreteDistribution& q);

inline constexpr int kDefaultHistogramBins = 50;
inline constexpr int kDefaultKdeGrid = 512;

// Equal-width histograms over the joint sample range, then jsd.
double jsd_histogram(std::span<const double> a, std::span<const double> b, int bins = kDefaultHistogramBins);

// n^(-1/5).
double scott_factor(std::size_t n);
// Scott's rule bandwidth: scott_factor(n) times the sample standard deviation.
double scott_bandwidth(std::span<const double> samples);

// Gaussian KDEs evaluated on a shared grid spanning both samples +-3 of the
// widest bandwidth, normalized and compared with jsd. Side a uses
// `bandwidths_a` (one per sample) when given; otherwise both sides use Scott's
// rule. Throws DomainError for a zero-variance side that needs Scott's rule.
double jsd_kde(std::span<const double> a, std::span<const double> b,
               std::optional<std::span<const double>> bandwidths_a = std::nullopt, int grid = kDefaultKdeGrid);

struct HourlyObservation {
  int month = 1;  // 1..12
  int hour = 0;   // 0..23
  double value = 0.0;
};

// Mean value per (month, hour). Hours never observed in a month are NaN.
using MonthlyShape = std::map<int, std::array<double, 24>>;
MonthlyShape aggregate_monthly(std::span<const HourlyObservation> observations);

// Pearson correlation; nullopt when either side has zero variance. NaN pairs
// are skipped.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

// Per-month correlation of the 24 aggregated hourly means. Both inputs must
// cover the same months.
std::map<int, std::optional<double>> pearson_monthly(const MonthlyShape& a, const MonthlyShape& b);
std::map<int, std::optional<double>> pearson_monthly(std::span<const HourlyObservation> a,
                                                     std::span<const HourlyObservation> b);

// Mean per-month correlation over many series pairs, skipping undefined ones.
std::map<int, std::optional<double>> pearson_monthly_pairs(
    std::span<const std::pair<MonthlyShape, MonthlyShape>> pairs);

// 100 |synth - real| / real; nullopt when real == 0.
std::optional<double> relative_pct_diff(double real, double synth);

}  // namespace solartwin
