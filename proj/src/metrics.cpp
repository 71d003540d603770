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

#include "solartwin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "solartwin/error.hpp"

namespace solartwin {
namespace {

void require_same_edges(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  if (p.bin_edges != q.bin_edges) throw DomainError("distributions do not share bin edges");
}

double sample_std(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0));
}

std::vector<double> normalized(std::vector<double> w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) throw NumericalError("density vanished on the evaluation grid");
  for (double& v : w) v /= total;
  return w;
}

// Edges of `bins` equal bins over [lo, hi].
std::vector<double> equal_edges(double lo, double hi, int bins) {
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
  return edges;
}

}  // namespace

void DiscreteDistribution::validate() const {
  if (mass.empty()) throw DomainError("distribution has no bins");
  if (bin_edges.size() != mass.size() + 1)
    throw DomainError(fmt::format("distribution has {} bins but {} edges", mass.size(), bin_edges.size()));
  for (std::size_t i = 1; i < bin_edges.size(); ++i)
    if (!(bin_edges[i] > bin_edges[i - 1])) throw DomainError("distribution bin edges must ascend");
  double total = 0.0;
  for (double m : mass) {
    if (!(m >= 0.0)) throw DomainError("distribution mass must be >= 0");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError(fmt::format("distribution mass sums to {}", total));
}

DiscreteDistribution make_distribution(std::vector<double> mass) {
  DiscreteDistribution d;
  d.bin_edges.resize(mass.size() + 1);
  std::iota(d.bin_edges.begin(), d.bin_edges.end(), 0.0);
  d.mass = std::move(mass);
  d.validate();
  return d;
}

double kld(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  require_same_edges(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.mass.size(); ++i) {
    if (p.mass[i] <= 0.0) continue;
    if (q.mass[i] <= 0.0) return std::numeric_limits<double>::infinity();
    sum += p.mass[i] * std::log2(p.mass[i] / q.mass[i]);
  }
  return std::max(sum, 0.0);
}

double jsd(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  require_same_edges(p, q);
  DiscreteDistribution m;
  m.bin_edges = p.bin_edges;
  m.mass.resize(p.mass.size());
  for (std::size_t i = 0; i < m.mass.size(); ++i) m.mass[i] = 0.5 * (p.mass[i] + q.mass[i]);
  return std::clamp(0.5 * kld(p, m) + 0.5 * kld(q, m), 0.0, 1.0);
}

double jsd_histogram(std::span<const double> a, std::span<const double> b, int bins) {
  if (a.empty() || b.empty()) throw DomainError("jsd_histogram: both sample sets must be non-empty");
  if (bins < 1) throw DomainError("jsd_histogram: bins must be >= 1");
  const auto [amin, amax] = std::minmax_element(a.begin(), a.end());
  const auto [bmin, bmax] = std::minmax_element(b.begin(), b.end());
  const double lo = std::min(*amin, *bmin);
  double hi = std::max(*amax, *bmax);
  if (!(hi > lo)) hi = lo + 1.0;  // all samples equal: one occupied bin on both sides

  auto histogram = [&](std::span<const double> x) {
    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    for (double v : x) {
      auto bin = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
      counts[static_cast<std::size_t>(std::clamp(bin, 0, bins - 1))] += 1.0;
    }
    DiscreteDistribution d;
    d.bin_edges = equal_edges(lo, hi, bins);
    d.mass = normalized(std::move(counts));
    return d;
  };
  return jsd(histogram(a), histogram(b));
}

double scott_factor(std::size_t n) {
  if (n == 0) throw DomainError("scott_factor: n must be >= 1");
  // exp2 / log2 keeps powers of two exact (32 -> 0.5).
  return std::exp2(-std::log2(static_cast<double>(n)) / 5.0);
}

double scott_bandwidth(std::span<const double> samples) {
  if (samples.size() < 2) throw DomainError("scott_bandwidth: need at least two samples");
  return scott_factor(samples.size()) * sample_std(samples);
}

double jsd_kde(std::span<const double> a, std::span<const double> b, std::optional<std::span<const double>> bandwidths_a,
               int grid) {
  if (a.size() < 2 || b.size() < 2) throw DomainError("jsd_kde: both sample sets need at least two values");
  if (grid < 2) throw DomainError("jsd_kde: grid must have at least two points");

  auto scott = [](std::span<const double> x, const char* side) {
    const double h = scott_bandwidth(x);
    if (!(h > 0.0))
      throw DomainError(fmt::format("jsd_kde: sample set {} has zero variance; use the histogram variant", side));
    return std::vector<double>(x.size(), h);
  };
  std::vector<double> ha;
  if (bandwidths_a) {
    if (bandwidths_a->size() != a.size()) throw DomainError("jsd_kde: one bandwidth per sample expected");
    ha.assign(bandwidths_a->begin(), bandwidths_a->end());
    for (double h : ha)
      if (!(h > 0.0)) throw DomainError("jsd_kde: bandwidths must be > 0");
  } else {
    ha = scott(a, "a");
  }
  const std::vector<double> hb = scott(b, "b");

  const double h_max = std::max(*std::max_element(ha.begin(), ha.end()), hb.front());
  const double lo = std::min(*std::min_element(a.begin(), a.end()), *std::min_element(b.begin(), b.end())) - 3.0 * h_max;
  const double hi = std::max(*std::max_element(a.begin(), a.end()), *std::max_element(b.begin(), b.end())) + 3.0 * h_max;

  std::vector<double> xs(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (grid - 1);

  auto density = [&](std::span<const double> x, const std::vector<double>& h) {
    std::vector<double> d(xs.size(), 0.0);
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double norm = 1.0 / (h[k] * std::sqrt(2.0 * std::numbers::pi));
      for (std::size_t g = 0; g < xs.size(); ++g) {
        const double z = (xs[g] - x[k]) / h[k];
        d[g] += norm * std::exp(-0.5 * z * z);
      }
    }
    return normalized(std::move(d));
  };

  // Grid points act as bin centers.
  std::vector<double> edges(xs.size() + 1);
  const double step = (hi - lo) / (grid - 1);
  for (std::size_t g = 0; g <= xs.size(); ++g) edges[g] = lo - 0.5 * step + step * static_cast<double>(g);
  DiscreteDistribution pa{edges, density(a, ha)};
  DiscreteDistribution pb{edges, density(b, hb)};
  return jsd(pa, pb);
}

MonthlyShape aggregate_monthly(std::span<const HourlyObservation> observations) {
  std::map<int, std::array<std::pair<double, int>, 24>> sums;
  for (const auto& o : observations) {
    if (o.month < 1 || o.month > 12) throw DomainError(fmt::format("month {} outside 1..12", o.month));
    if (o.hour < 0 || o.hour > 23) throw DomainError(fmt::format("hour {} outside 0..23", o.hour));
    auto& cell = sums[o.month][static_cast<std::size_t>(o.hour)];
    cell.first += o.value;
    ++cell.second;
  }
  MonthlyShape out;
  for (const auto& [month, cells] : sums) {
    auto& row = out[month];
    for (std::size_t h = 0; h < 24; ++h)
      row[h] = cells[h].second > 0 ? cells[h].first / cells[h].second : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("pearson: series differ in length");
  double n = 0.0, ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) continue;
    n += 1.0;
    ma += a[i];
    mb += b[i];
  }
  if (n < 2.0) return std::nullopt;
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) continue;
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::map<int, std::optional<double>> pearson_monthly(const MonthlyShape& a, const MonthlyShape& b) {
  std::map<int, std::optional<double>> out;
  for (const auto& [month, row] : a) {
    const auto it = b.find(month);
    if (it == b.end()) throw DomainError(fmt::format("pearson_monthly: month {} missing from second series", month));
    out[month] = pearson(row, it->second);
  }
  for (const auto& entry : b)
    if (!a.contains(entry.first))
      throw DomainError(fmt::format("pearson_monthly: month {} missing from first series", entry.first));
  return out;
}

std::map<int, std::optional<double>> pearson_monthly(std::span<const HourlyObservation> a,
                                                     std::span<const HourlyObservation> b) {
  return pearson_monthly(aggregate_monthly(a), aggregate_monthly(b));
}

std::map<int, std::optional<double>> pearson_monthly_pairs(
    std::span<const std::pair<MonthlyShape, MonthlyShape>> pairs) {
  std::map<int, std::pair<double, int>> sums;
  for (const auto& [a, b] : pairs) {
    for (const auto& [month, r] : pearson_monthly(a, b)) {
      auto& s = sums[month];
      if (r) {
        s.first += *r;
        ++s.second;
      }
    }
  }
  std::map<int, std::optional<double>> out;
  for (const auto& [month, s] : sums)
    out[month] = s.second > 0 ? std::optional<double>(s.first / s.second) : std::nullopt;
  return out;
}

std::optional<double> relative_pct_diff(double real, double synth) {
  if (real < 0.0 || synth < 0.0) throw DomainError("relative_pct_diff: counts must be >= 0");
  if (real == 0.0) return std::nullopt;
  return 100.0 * std::abs(synth - real) / real;
}

}  // namespace solartwin
