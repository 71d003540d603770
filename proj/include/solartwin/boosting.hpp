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

#include <concepts>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "solartwin/dataset.hpp"

namespace solartwin {

// Probabilities are clamped to [eps, 1 - eps] before taking logs.
inline constexpr double kProbEpsilon = 1e-12;

struct GradHess {
  double grad = 0.0;
  double hess = 0.0;
};

// -(1/T) sum[ y ln p + beta (1 - y) ln(1 - p) ]
double weighted_log_loss(std::span<const int> y, std::span<const double> p, double beta);

// Derivatives of the per-sample weighted log loss with respect to the logit:
//   grad = p (y + beta (1 - y)) - y,  hess = p (1 - p) (y + beta (1 - y)).
GradHess loss_grad_hess(int y, double p, double beta);

// beta weighs the negative class in the loss; tau is the decision threshold.
struct LossParams {
  double beta = 1.0;
  double tau = 0.5;

  void validate() const;
};

// 1 iff p >= tau.
constexpr int apply_threshold(double p, double tau) noexcept { return p >= tau ? 1 : 0; }

template <typename L>
concept BoostingLoss = requires(const L& loss, int y, double p) {
  { loss.grad_hess(y, p) } -> std::same_as<GradHess>;
  { loss.value(y, p) } -> std::convertible_to<double>;
};

struct WeightedLogisticLoss {
  double beta = 1.0;

  GradHess grad_hess(int y, double p) const { return loss_grad_hess(y, p, beta); }
  double value(int y, double p) const;
};

// Plain binary cross-entropy.
struct LogisticLoss {
  GradHess grad_hess(int y, double p) const { return {p - y, p * (1.0 - p)}; }
  double value(int y, double p) const;
};

// Axis-aligned split on an ordinal code: rows with x[feature] <= split_code go left.
struct TreeNode {
  int feature = -1;
  int split_code = 0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // logit increment at a leaf (learning rate applied)

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;

  double predict(const int* x) const;
  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

struct GbtParams {
  int rounds = 100;
  int max_depth = 3;
  double learning_rate = 0.3;
  double lambda = 1.0;
  double min_child_weight = 1.0;
  double base_score = 0.0;  // initial logit

  void validate() const;
};

struct GbtModel {
  std::vector<RegressionTree> trees;
  double learning_rate = 0.3;
  double base_score = 0.0;
  std::vector<int> domains;

  // Summed logit. Throws DomainError naming the feature for out-of-domain codes.
  double margin(std::span<const int> x) const;
  double predict_proba(std::span<const int> x) const;
  Eigen::VectorXd predict_proba(const CodeMatrix& x) const;

  friend bool operator==(const GbtModel&, const GbtModel&) = default;
};

double sigmoid(double z) noexcept;

// Newton boosting on a binary target with an arbitrary per-sample loss.
// `loss_trace`, when given, receives the mean training loss after each round.
GbtModel train_gbt_with(const CodeMatrix& x, const Eigen::VectorXi& y, const std::vector<int>& domains,
                        const GbtParams& params, const std::function<GradHess(int, double)>& grad_hess,
                        const std::function<double(int, double)>& loss_value, std::vector<double>* loss_trace);

template <BoostingLoss L>
GbtModel train_gbt(const CodeMatrix& x, const Eigen::VectorXi& y, const std::vector<int>& domains,
                   const GbtParams& params, const L& loss, std::vector<double>* loss_trace = nullptr) {
  return train_gbt_with(
      x, y, domains, params, [&loss](int label, double p) { return loss.grad_hess(label, p); },
      [&loss](int label, double p) { return loss.value(label, p); }, loss_trace);
}

// Binary model under the weighted log loss. Training is deterministic; the seed
// is accepted for interface symmetry with stochastic members.
GbtModel train_gbt(const LabeledDataset& data, const GbtParams& params, const LossParams& loss, std::uint64_t seed = 0);

// Versioned text format:
//   solartwin-gbt 1
//   base_score <v>
//   learning_rate <v>
//   domains <n> <d1> ... <dn>
//   trees <T>
//   tree <node count>
//   <feature> <split_code> <left> <right> <value>     (one line per node)
void write_model(std::ostream& out, const GbtModel& model);
GbtModel read_model(std::istream& in);

}  // namespace solartwin
