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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solartwin/core_data.hpp"

namespace solartwin {

enum class PolicyCase { C1a, C1b, C2a, C2b, C3, C4, C5 };

inline constexpr std::array<PolicyCase, 7> kAllPolicyCases = {PolicyCase::C1a, PolicyCase::C1b, PolicyCase::C2a,
                                                              PolicyCase::C2b, PolicyCase::C3,  PolicyCase::C4,
                                                              PolicyCase::C5};

std::string_view case_name(PolicyCase c) noexcept;
// "1a", "1b", "2a", "2b", "3", "4", "5"; throws ConfigError otherwise.
PolicyCase parse_case(std::string_view text);

// Fixed node probabilities of the non-rebate cases.
struct CaseProbabilities {
  double non_lmi = 0.0;
  double lmi = 0.0;
};
CaseProbabilities case_probabilities(PolicyCase c);

// LMI node probability by step (1-based) in case 3; later steps reuse the last value.
inline constexpr std::array<double, 10> kCase3LmiSequence = {0.3, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};

struct UtilityWeights {
  double personal = 0.4;   // w1
  double community = 0.3;  // w2
  double neighbor = 0.3;   // w3

  void validate() const;
};

struct RebateParams {
  double cost_per_watt = 3.04;
  double credit_rate = 0.30;
  double lmi_extra_credit = 0.20;  // added to credit_rate for LMI households in case 5
  double capacity_factor = 0.15;
  int bins = 10;
  double max_probability = 0.1;

  void validate() const;
};

struct DiffusionConfig {
  UtilityWeights weights;
  int time_steps = 10;
  int iterations = 1;
  PolicyCase policy = PolicyCase::C1a;
  RebateParams rebate;
  double non_lmi_probability = 0.1;  // cases 2a, 2b and 3
  std::uint64_t seed = 0;

  void validate() const;
};

// Barrier flag order.
enum class Barrier { Internet, Language, RaceSocioeconomic, Rental, Education, Income, HouseAge, MemberAge };
using BarrierFlags = std::array<bool, 8>;

// 0.1 + 0.85 * (true flags) / 8.
double threshold_from_barriers(const BarrierFlags& flags);

// Flags from survey codes where available (rental, income, house age, LMI as
// the socioeconomic flag); the remaining flags are seeded per-household draws
// whose rates are higher for LMI households.
BarrierFlags barrier_flags(const HouseholdRecord& h, std::uint64_t seed);

// w1 p + w2 c + w3 n.
double utility(double p, double c, double n, const UtilityWeights& w);

// Installed watts implied by annual_kwh, times cost and credit rate.
double rebate_value(double annual_kwh, double cost_per_watt, double credit_rate, double capacity_factor = 0.15);

struct DiffusionNode {
  bool lmi = false;
  bool rural = false;
  int county = 0;
  double threshold = 0.1;
  double benefit = 0.0;     // personal benefit p in [0, 1]
  double annual_kwh = 0.0;  // for rebate cases
  bool adopted = false;     // initial state
};

// One node per household, in table order. `potential_daily_kwh` is the mean
// daily generation each household could produce; it is min-max normalized
// into the personal benefit (0.5 for everyone when all values are equal).
std::vector<DiffusionNode> make_diffusion_nodes(const HouseholdTable& households,
                                                std::span<const double> potential_daily_kwh, std::uint64_t seed);

// Rebate-ranked node probabilities for cases 4 and 5: nodes sorted by rebate
// (ties by index) fill `bins` equal-population bins; bin b of B maps to
// max_probability * b / (B - 1). Empty for other cases.
std::vector<double> rebate_probabilities(std::span<const DiffusionNode> nodes, const DiffusionConfig& config);

// Node probability at a 1-based step.
double node_probability(const DiffusionConfig& config, const DiffusionNode& node, int step,
                        std::span<const double> rebate_probs, std::size_t index);

struct StepCounts {
  int step = 0;
  std::int64_t total = 0;
  std::int64_t lmi_rural = 0;
  std::int64_t lmi_urban = 0;
  std::int64_t nonlmi_rural = 0;
  std::int64_t nonlmi_urban = 0;
};

struct DiffusionState {
  int step = 0;
  std::vector<char> adopted;
  std::vector<double> county_rate;  // adopters / households per county
  std::int64_t adopters = 0;
};

DiffusionState initial_state(std::span<const DiffusionNode> nodes);
StepCounts count_adopters(std::span<const DiffusionNode> nodes, const DiffusionState& state);

// One synchronous step: each non-adopter passes a Bernoulli(node probability)
// gate and then adopts iff its utility, computed from the state at the start of
// the step, exceeds its threshold. Gate draws are keyed by (seed, iteration,
// step, node) so the outcome is independent of evaluation order.
DiffusionState step(const DiffusionState& state, std::span<const DiffusionNode> nodes, const Adjacency& adjacency,
                    const DiffusionConfig& config, std::span<const double> rebate_probs, int iteration);

struct DiffusionRun {
  std::vector<DiffusionState> states;  // states[0] is the initial state
  std::vector<StepCounts> counts;
};

// config.iterations independent runs of config.time_steps steps.
std::vector<DiffusionRun> simulate(std::span<const DiffusionNode> nodes, const Graph& graph,
                                   const DiffusionConfig& config);

// Per-step counts averaged over runs.
struct TimelineRow {
  PolicyCase policy = PolicyCase::C1a;
  int step = 0;
  double total = 0.0;
  double lmi_rural = 0.0;
  double lmi_urban = 0.0;
  double nonlmi_rural = 0.0;
  double nonlmi_urban = 0.0;
};
std::vector<TimelineRow> mean_timeline(PolicyCase policy, std::span<const DiffusionRun> runs);

// adoption_timeline.csv: case,step,total_adopters,lmi_rural,lmi_urban,nonlmi_rural,nonlmi_urban
void write_timeline(std::ostream& out, std::span<const TimelineRow> rows);
void save_timeline(const std::filesystem::path& path, std::span<const TimelineRow> rows);

}  // namespace solartwin
