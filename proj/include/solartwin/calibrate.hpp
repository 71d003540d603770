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
#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

#include <Eigen/Core>

#include "solartwin/boosting.hpp"
#include "solartwin/dataset.hpp"

namespace solartwin {

// Discrete (beta, tau) search space: beta in [0, 2.01) and tau in [0.05, 0.95],
// both in steps of 0.01. Index = beta_index * tau_count + tau_index, so
// ascending index order is "lowest beta, then lowest tau".
struct CalibrationGrid {
  double beta_min = 0.0;
  double beta_step = 0.01;
  int beta_count = 201;
  double tau_min = 0.05;
  double tau_step = 0.01;
  int tau_count = 91;

  std::size_t size() const noexcept { return static_cast<std::size_t>(beta_count) * static_cast<std::size_t>(tau_count); }
  double beta(int i) const;
  double tau(int j) const;
  int beta_index(std::size_t index) const noexcept { return static_cast<int>(index / static_cast<std::size_t>(tau_count)); }
  int tau_index(std::size_t index) const noexcept { return static_cast<int>(index % static_cast<std::size_t>(tau_count)); }
  void validate() const;
};

struct CalibrationOptions {
  int budget = 2000;
  int init = 10;
  std::uint64_t seed = 0;
  // Stop once |target - predicted| <= tolerance_fraction * target.
  double tolerance_fraction = 0.15;
  CalibrationGrid grid;
  GbtParams gbt;

  void validate() const;
};

struct CalibrationStep {
  int round = 0;
  double beta = 0.0;
  double tau = 0.0;
  std::int64_t predicted = 0;
  std::int64_t target = 0;
  double diff = 0.0;  // |target - predicted|
};

struct CalibrationResult {
  double beta_star = 0.0;
  double tau_star = 0.0;
  double discrepancy = 0.0;
  std::vector<CalibrationStep> trace;
  int rounds_used = 0;
  bool converged = false;
};

// Predicted adopter count for a (beta, tau) pair.
using AdopterCounter = std::function<std::int64_t(double beta, double tau)>;

// Bayesian optimization of |target - count(beta, tau)| over the grid: `init`
// distinct random grid points, then repeatedly fit a GP to every observation
// and evaluate the unevaluated grid point with the largest expected
// improvement (ties to lowest beta, then lowest tau). Stops inside the
// tolerance band or after `budget` evaluations.
CalibrationResult calibrate(const AdopterCounter& count, std::int64_t target, const CalibrationOptions& options);

// Trains a boosted model per beta on `train` (cached by beta) and counts rows
// of `apply` whose probability reaches tau.
class AdoptionCounter {
 public:
  AdoptionCounter(const LabeledDataset& train, CodeMatrix apply, GbtParams params);

  std::int64_t operator()(double beta, double tau);
  const Eigen::VectorXd& probabilities(double beta);
  GbtModel model(double beta) const;

 private:
  const LabeledDataset& train_;
  CodeMatrix apply_;
  GbtParams params_;
  std::map<double, Eigen::VectorXd> cache_;
};

CalibrationResult calibrate(const LabeledDataset& train, const CodeMatrix& apply, std::int64_t target,
                            const CalibrationOptions& options);

// calibration_trace.csv: round,beta,tau,predicted,target,diff
void write_trace(std::ostream& out, const CalibrationResult& result);
void save_trace(const std::filesystem::path& path, const CalibrationResult& result);

}  // namespace solartwin
