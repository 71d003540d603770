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

#include "solartwin/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "solartwin/csv.hpp"
#include "solartwin/error.hpp"
#include "solartwin/rng.hpp"

namespace solartwin {
namespace {

constexpr double kThresholdMin = 0.1;
constexpr double kThresholdMax = 0.95;

// Rates for barriers that have no survey column: {non-LMI, LMI}.
struct ProxyRate {
  Barrier barrier;
  double base;
  double lmi;
};
constexpr std::array<ProxyRate, 4> kProxyRates = {{
    {Barrier::Internet, 0.10, 0.25},
    {Barrier::Language, 0.08, 0.15},
    {Barrier::Education, 0.15, 0.35},
    {Barrier::MemberAge, 0.20, 0.20},
}};

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(fmt::format("{} = {} outside [0, 1]", name, v));
}

}  // namespace

std::string_view case_name(PolicyCase c) noexcept {
  switch (c) {
    case PolicyCase::C1a: return "1a";
    case PolicyCase::C1b: return "1b";
    case PolicyCase::C2a: return "2a";
    case PolicyCase::C2b: return "2b";
    case PolicyCase::C3: return "3";
    case PolicyCase::C4: return "4";
    case PolicyCase::C5: return "5";
  }
  return "?";
}

PolicyCase parse_case(std::string_view text) {
  for (PolicyCase c : kAllPolicyCases)
    if (case_name(c) == text) return c;
  throw ConfigError(fmt::format("unknown case '{}' (expected 1a, 1b, 2a, 2b, 3, 4 or 5)", text));
}

CaseProbabilities case_probabilities(PolicyCase c) {
  switch (c) {
    case PolicyCase::C1a: return {0.1, 0.1};
    case PolicyCase::C1b: return {0.2, 0.2};
    case PolicyCase::C2a: return {0.1, 0.2};
    case PolicyCase::C2b: return {0.1, 0.5};
    case PolicyCase::C3: return {0.1, kCase3LmiSequence.front()};
    case PolicyCase::C4:
    case PolicyCase::C5: return {0.0, 0.0};
  }
  return {};
}

void UtilityWeights::validate() const {
  check_unit(personal, "w1");
  check_unit(community, "w2");
  check_unit(neighbor, "w3");
  if (std::abs(personal + community + neighbor - 1.0) > 1e-9)
    throw ConfigError(fmt::format("utility weights sum to {}, expected 1", personal + community + neighbor));
}

void RebateParams::validate() const {
  if (!(cost_per_watt > 0.0)) throw ConfigError("rebate cost_per_watt must be > 0");
  if (!(credit_rate >= 0.0)) throw ConfigError("rebate credit_rate must be >= 0");
  if (!(lmi_extra_credit >= 0.0)) throw ConfigError("rebate lmi_extra_credit must be >= 0");
  if (!(capacity_factor > 0.0 && capacity_factor <= 1.0)) throw ConfigError("capacity_factor must be in (0, 1]");
  if (bins < 2) throw ConfigError("rebate bins must be >= 2");
  if (!(max_probability >= 0.0 && max_probability <= 0.1))
    throw ConfigError("rebate max_probability must be in [0, 0.1]");
}

void DiffusionConfig::validate() const {
  weights.validate();
  rebate.validate();
  if (time_steps < 0) throw ConfigError("time_steps must be >= 0");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  check_unit(non_lmi_probability, "non_lmi_probability");
}

double threshold_from_barriers(const BarrierFlags& flags) {
  const auto count = std::count(flags.begin(), flags.end(), true);
  return kThresholdMin + (kThresholdMax - kThresholdMin) * static_cast<double>(count) / 8.0;
}

BarrierFlags barrier_flags(const HouseholdRecord& h, std::uint64_t seed) {
  BarrierFlags flags{};
  const bool lmi = h.lmi.value_or(false);
  auto set = [&flags](Barrier b, bool v) { flags[static_cast<std::size_t>(b)] = v; };
  set(Barrier::RaceSocioeconomic, lmi);
  set(Barrier::Rental, h.feature(Feature::KOWNRENT) == 2);
  set(Barrier::Income, h.feature(Feature::MONEYPY) <= 5);
  set(Barrier::HouseAge, h.feature(Feature::YEARMADERANGE) <= 2);
  for (const auto& proxy : kProxyRates) {
    const double u = unit_from_bits(derive_seed(seed, static_cast<std::uint64_t>(h.id),
                                                static_cast<std::uint64_t>(proxy.barrier)));
    set(proxy.barrier, u < (lmi ? proxy.lmi : proxy.base));
  }
  return flags;
}

double utility(double p, double c, double n, const UtilityWeights& w) {
  return w.personal * p + w.community * c + w.neighbor * n;
}

double rebate_value(double annual_kwh, double cost_per_watt, double credit_rate, double capacity_factor) {
  if (annual_kwh < 0.0 || cost_per_watt < 0.0 || credit_rate < 0.0 || !(capacity_factor > 0.0))
    throw DomainError("rebate_value: inputs must be non-negative and capacity factor > 0");
  const double watts = annual_kwh * 1000.0 / (capacity_factor * 8760.0);
  return credit_rate * cost_per_watt * watts;
}

std::vector<DiffusionNode> make_diffusion_nodes(const HouseholdTable& households,
                                                std::span<const double> potential_daily_kwh, std::uint64_t seed) {
  if (potential_daily_kwh.size() != households.size())
    throw DomainError(fmt::format("{} generation values for {} households", potential_daily_kwh.size(),
                                  households.size()));
  std::map<std::string, int> counties;
  for (const auto& h : households) counties.emplace(h.county, 0);
  int next = 0;
  for (auto& [name, index] : counties) index = next++;

  double lo = 0.0, hi = 0.0;
  if (!potential_daily_kwh.empty()) {
    const auto [mn, mx] = std::minmax_element(potential_daily_kwh.begin(), potential_daily_kwh.end());
    lo = *mn;
    hi = *mx;
  }
  std::vector<DiffusionNode> nodes(households.size());
  for (std::size_t i = 0; i < households.size(); ++i) {
    const auto& h = households[i];
    auto& node = nodes[i];
    node.lmi = h.lmi.value_or(false);
    node.rural = h.rural.value_or(false);
    node.county = counties.at(h.county);
    node.threshold = threshold_from_barriers(barrier_flags(h, seed));
    node.benefit = hi > lo ? (potential_daily_kwh[i] - lo) / (hi - lo) : 0.5;
    node.annual_kwh = potential_daily_kwh[i] * 365.0;
    node.adopted = h.solar.value_or(false);
  }
  return nodes;
}

std::vector<double> rebate_probabilities(std::span<const DiffusionNode> nodes, const DiffusionConfig& config) {
  if (config.policy != PolicyCase::C4 && config.policy != PolicyCase::C5) return {};
  const RebateParams& r = config.rebate;
  std::vector<double> rebate(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double rate = r.credit_rate;
    if (config.policy == PolicyCase::C5 && nodes[i].lmi) rate += r.lmi_extra_credit;
    rebate[i] = rebate_value(nodes[i].annual_kwh, r.cost_per_watt, rate, r.capacity_factor);
  }
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rebate[a] < rebate[b]; });
  std::vector<double> probs(nodes.size(), 0.0);
  const auto n = order.size();
  for (std::size_t rank = 0; rank < n; ++rank) {
    const auto bin = static_cast<int>(rank * static_cast<std::size_t>(r.bins) / n);
    probs[order[rank]] = r.max_probability * bin / (r.bins - 1);
  }
  return probs;
}

double node_probability(const DiffusionConfig& config, const DiffusionNode& node, int step,
                        std::span<const double> rebate_probs, std::size_t index) {
  switch (config.policy) {
    case PolicyCase::C1a:
    case PolicyCase::C1b: return case_probabilities(config.policy).lmi;
    case PolicyCase::C2a:
    case PolicyCase::C2b: return node.lmi ? case_probabilities(config.policy).lmi : config.non_lmi_probability;
    case PolicyCase::C3: {
      if (!node.lmi) return config.non_lmi_probability;
      const auto i = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(step, 1) - 1), 0,
                                             kCase3LmiSequence.size() - 1);
      return kCase3LmiSequence[i];
    }
    case PolicyCase::C4:
    case PolicyCase::C5:
      if (index >= rebate_probs.size()) throw DomainError("node_probability: rebate probabilities missing");
      return rebate_probs[index];
  }
  return 0.0;
}

DiffusionState initial_state(std::span<const DiffusionNode> nodes) {
  DiffusionState s;
  s.adopted.resize(nodes.size());
  int counties = 0;
  for (const auto& n : nodes) counties = std::max(counties, n.county + 1);
  std::vector<std::int64_t> size(static_cast<std::size_t>(counties), 0), adopters(size.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    s.adopted[i] = nodes[i].adopted ? 1 : 0;
    ++size[static_cast<std::size_t>(nodes[i].county)];
    adopters[static_cast<std::size_t>(nodes[i].county)] += s.adopted[i];
    s.adopters += s.adopted[i];
  }
  s.county_rate.resize(size.size());
  for (std::size_t c = 0; c < size.size(); ++c)
    s.county_rate[c] = size[c] > 0 ? static_cast<double>(adopters[c]) / static_cast<double>(size[c]) : 0.0;
  return s;
}

StepCounts count_adopters(std::span<const DiffusionNode> nodes, const DiffusionState& state) {
  StepCounts c;
  c.step = state.step;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!state.adopted[i]) continue;
    ++c.total;
    if (nodes[i].lmi)
      ++(nodes[i].rural ? c.lmi_rural : c.lmi_urban);
    else
      ++(nodes[i].rural ? c.nonlmi_rural : c.nonlmi_urban);
  }
  return c;
}

DiffusionState step(const DiffusionState& state, std::span<const DiffusionNode> nodes, const Adjacency& adjacency,
                    const DiffusionConfig& config, std::span<const double> rebate_probs, int iteration) {
  const int t = state.step + 1;
  DiffusionState next = state;
  next.step = t;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (state.adopted[i]) continue;
    const double prob = node_probability(config, nodes[i], t, rebate_probs, i);
    const double gate = unit_from_bits(derive_seed(config.seed, static_cast<std::uint64_t>(iteration),
                                                   static_cast<std::uint64_t>(t), i));
    if (!(gate < prob)) continue;
    double n = 0.0;
    if (const auto degree = adjacency.degree(i); degree > 0) {
      std::size_t adopted = 0;
      for (std::size_t j : adjacency.of(i)) adopted += state.adopted[j] ? 1 : 0;
      n = static_cast<double>(adopted) / static_cast<double>(degree);
    }
    const double c = state.county_rate[static_cast<std::size_t>(nodes[i].county)];
    if (utility(nodes[i].benefit, c, n, config.weights) > nodes[i].threshold) next.adopted[i] = 1;
  }

  std::vector<std::int64_t> size(state.county_rate.size(), 0), adopters(size.size(), 0);
  next.adopters = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ++size[static_cast<std::size_t>(nodes[i].county)];
    adopters[static_cast<std::size_t>(nodes[i].county)] += next.adopted[i];
    next.adopters += next.adopted[i];
  }
  for (std::size_t c = 0; c < size.size(); ++c)
    next.county_rate[c] = size[c] > 0 ? static_cast<double>(adopters[c]) / static_cast<double>(size[c]) : 0.0;
  return next;
}

std::vector<DiffusionRun> simulate(std::span<const DiffusionNode> nodes, const Graph& graph,
                                   const DiffusionConfig& config) {
  config.validate();
  if (graph.node_count != nodes.size())
    throw DomainError(fmt::format("network has {} nodes for {} households", graph.node_count, nodes.size()));
  for (const auto& n : nodes) {
    if (n.threshold < kThresholdMin - 1e-12 || n.threshold > kThresholdMax + 1e-12)
      throw DomainError(fmt::format("node threshold {} outside [0.1, 0.95]", n.threshold));
    check_unit(n.benefit, "personal benefit");
    if (n.county < 0) throw DomainError("negative county index");
  }
  const Adjacency adjacency = build_adjacency(graph);
  const std::vector<double> rebate_probs = rebate_probabilities(nodes, config);

  std::vector<DiffusionRun> runs(static_cast<std::size_t>(config.iterations));
  for (int it = 0; it < config.iterations; ++it) {
    auto& run = runs[static_cast<std::size_t>(it)];
    run.states.push_back(initial_state(nodes));
    run.counts.push_back(count_adopters(nodes, run.states.back()));
    for (int t = 0; t < config.time_steps; ++t) {
      run.states.push_back(step(run.states.back(), nodes, adjacency, config, rebate_probs, it));
      run.counts.push_back(count_adopters(nodes, run.states.back()));
    }
  }
  return runs;
}

std::vector<TimelineRow> mean_timeline(PolicyCase policy, std::span<const DiffusionRun> runs) {
  std::vector<TimelineRow> rows;
  if (runs.empty()) return rows;
  rows.resize(runs.front().counts.size());
  for (std::size_t s = 0; s < rows.size(); ++s) {
    auto& row = rows[s];
    row.policy = policy;
    row.step = static_cast<int>(s);
    for (const auto& run : runs) {
      const auto& c = run.counts.at(s);
      row.total += static_cast<double>(c.total);
      row.lmi_rural += static_cast<double>(c.lmi_rural);
      row.lmi_urban += static_cast<double>(c.lmi_urban);
      row.nonlmi_rural += static_cast<double>(c.nonlmi_rural);
      row.nonlmi_urban += static_cast<double>(c.nonlmi_urban);
    }
    const auto k = static_cast<double>(runs.size());
    row.total /= k;
    row.lmi_rural /= k;
    row.lmi_urban /= k;
    row.nonlmi_rural /= k;
    row.nonlmi_urban /= k;
  }
  return rows;
}

void write_timeline(std::ostream& out, std::span<const TimelineRow> rows) {
  out << "case,step,total_adopters,lmi_rural,lmi_urban,nonlmi_rural,nonlmi_urban\n";
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{},{},{},{}\n", case_name(r.policy), r.step, csv::format_number(r.total),
                       csv::format_number(r.lmi_rural), csv::format_number(r.lmi_urban),
                       csv::format_number(r.nonlmi_rural), csv::format_number(r.nonlmi_urban));
}

void save_timeline(const std::filesystem::path& path, std::span<const TimelineRow> rows) {
  auto out = csv::open_output(path);
  write_timeline(out, rows);
}

}  // namespace solartwin
