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

#include "solartwin/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "solartwin/csv.hpp"
#include "solartwin/error.hpp"
#include "solartwin/gp.hpp"
#include "solartwin/rng.hpp"

namespace solartwin {
namespace {

// Grid coordinates are kept on exact two-decimal values so that printed and
// cached betas agree.
double snap(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace

double CalibrationGrid::beta(int i) const { return snap(beta_min + i * beta_step); }
double CalibrationGrid::tau(int j) const { return snap(tau_min + j * tau_step); }

void CalibrationGrid::validate() const {
  if (beta_count < 1 || tau_count < 1) throw ConfigError("calibration grid must be non-empty");
  if (!(beta_step > 0.0) || !(tau_step > 0.0)) throw ConfigError("calibration grid steps must be > 0");
  if (beta_min < 0.0) throw ConfigError("calibration beta must be >= 0");
  if (tau_min <= 0.0 || tau(tau_count - 1) >= 1.0) throw ConfigError("calibration tau must lie in (0, 1)");
}

void CalibrationOptions::validate() const {
  grid.validate();
  if (init < 1) throw ConfigError("calibration init must be >= 1");
  if (budget < init) throw ConfigError(fmt::format("calibration budget {} is below init {}", budget, init));
  if (static_cast<std::size_t>(init) > grid.size()) throw ConfigError("calibration init exceeds the grid size");
  if (!(tolerance_fraction >= 0.0)) throw ConfigError("calibration tolerance must be >= 0");
  gbt.validate();
}

CalibrationResult calibrate(const AdopterCounter& count, std::int64_t target, const CalibrationOptions& options) {
  options.validate();
  if (target < 0) throw DomainError("calibrate: target must be >= 0");
  const CalibrationGrid& grid = options.grid;
  const std::size_t n_grid = grid.size();
  const double tolerance = options.tolerance_fraction * static_cast<double>(target);
  const int budget = static_cast<int>(std::min<std::size_t>(options.budget, n_grid));

  CalibrationResult result;
  std::vector<char> evaluated(n_grid, 0);
  std::vector<std::size_t> order;

  auto evaluate = [&](std::size_t index) {
    const double beta = grid.beta(grid.beta_index(index));
    const double tau = grid.tau(grid.tau_index(index));
    std::int64_t predicted = 0;
    try {
      predicted = count(beta, tau);
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("calibrate at beta={} tau={}: {}", beta, tau, e.what()));
    }
    evaluated[index] = 1;
    order.push_back(index);
    CalibrationStep step;
    step.round = static_cast<int>(result.trace.size()) + 1;
    step.beta = beta;
    step.tau = tau;
    step.predicted = predicted;
    step.target = target;
    step.diff = std::abs(static_cast<double>(target - predicted));
    result.trace.push_back(step);
    if (result.trace.size() == 1 || step.diff < result.discrepancy) {
      result.discrepancy = step.diff;
      result.beta_star = beta;
      result.tau_star = tau;
    }
    return step.diff <= tolerance;
  };

  Rng rng(options.seed);
  bool done = false;
  while (!done && static_cast<int>(result.trace.size()) < options.init) {
    std::size_t index;
    do {
      index = static_cast<std::size_t>(rng.below(n_grid));
    } while (evaluated[index]);
    done = evaluate(index);
  }

  GpMatrix<double> candidates;
  std::vector<std::size_t> candidate_index;
  while (!done && static_cast<int>(result.trace.size()) < budget) {
    const auto n = static_cast<Eigen::Index>(order.size());
    GpMatrix<double> points(n, 2);
    GpVector<double> values(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      points(i, 0) = result.trace[static_cast<std::size_t>(i)].beta;
      points(i, 1) = result.trace[static_cast<std::size_t>(i)].tau;
      values(i) = result.trace[static_cast<std::size_t>(i)].diff;
    }
    const double mean = values.mean();
    double var = n > 0 ? (values.array() - mean).square().mean() : 0.0;
    if (!(var > 0.0)) var = 1.0;

    RbfKernel<double> kernel;
    kernel.signal_variance = var;
    kernel.length_scales.resize(2);
    kernel.length_scales << 0.25 * (grid.beta(grid.beta_count - 1) - grid.beta(0)),
        0.25 * (grid.tau(grid.tau_count - 1) - grid.tau(0));
    for (Eigen::Index d = 0; d < 2; ++d)
      if (!(kernel.length_scales(d) > 0.0)) kernel.length_scales(d) = 1.0;
    kernel.noise_variance = 1e-6 * var;
    const GpModel<double> gp = gp_fit(points, values, kernel);

    candidate_index.clear();
    for (std::size_t idx = 0; idx < n_grid; ++idx)
      if (!evaluated[idx]) candidate_index.push_back(idx);
    candidates.resize(static_cast<Eigen::Index>(candidate_index.size()), 2);
    for (std::size_t c = 0; c < candidate_index.size(); ++c) {
      candidates(static_cast<Eigen::Index>(c), 0) = grid.beta(grid.beta_index(candidate_index[c]));
      candidates(static_cast<Eigen::Index>(c), 1) = grid.tau(grid.tau_index(candidate_index[c]));
    }
    GpVector<double> mu, sigma;
    gp_predict(gp, candidates, mu, sigma);

    const double f_min = result.discrepancy;
    std::size_t best = candidate_index.front();
    double best_ei = -1.0;
    for (std::size_t c = 0; c < candidate_index.size(); ++c) {
      const double ei =
          expected_improvement(mu(static_cast<Eigen::Index>(c)), sigma(static_cast<Eigen::Index>(c)), f_min);
      if (ei > best_ei) {
        best_ei = ei;
        best = candidate_index[c];
      }
    }
    done = evaluate(best);
  }

  result.rounds_used = static_cast<int>(result.trace.size());
  result.converged = result.discrepancy <= tolerance;
  return result;
}

AdoptionCounter::AdoptionCounter(const LabeledDataset& train, CodeMatrix apply, GbtParams params)
    : train_(train), apply_(std::move(apply)), params_(params) {
  train_.validate();
  if (apply_.cols() != train_.cols())
    throw DomainError(fmt::format("calibrate: apply data has {} features, training data has {}", apply_.cols(),
                                  train_.cols()));
}

GbtModel AdoptionCounter::model(double beta) const {
  LossParams loss;
  loss.beta = beta;
  return train_gbt(train_, params_, loss);
}

const Eigen::VectorXd& AdoptionCounter::probabilities(double beta) {
  auto it = cache_.find(beta);
  if (it == cache_.end()) it = cache_.emplace(beta, model(beta).predict_proba(apply_)).first;
  return it->second;
}

std::int64_t AdoptionCounter::operator()(double beta, double tau) {
  const Eigen::VectorXd& p = probabilities(beta);
  std::int64_t n = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) n += apply_threshold(p(i), tau);
  return n;
}

CalibrationResult calibrate(const LabeledDataset& train, const CodeMatrix& apply, std::int64_t target,
                            const CalibrationOptions& options) {
  if (target > apply.rows())
    throw DomainError(fmt::format("calibrate: target {} exceeds the {} households to label", target, apply.rows()));
  AdoptionCounter counter(train, apply, options.gbt);
  return calibrate([&counter](double beta, double tau) { return counter(beta, tau); }, target, options);
}

void write_trace(std::ostream& out, const CalibrationResult& result) {
  out << "round,beta,tau,predicted,target,diff\n";
  for (const auto& s : result.trace)
    out << fmt::format("{},{},{},{},{},{}\n", s.round, csv::format_number(s.beta), csv::format_number(s.tau),
                       s.predicted, s.target, csv::format_number(s.diff));
}

void save_trace(const std::filesystem::path& path, const CalibrationResult& result) {
  auto out = csv::open_output(path);
  write_trace(out, result);
}

}  // namespace solartwin
