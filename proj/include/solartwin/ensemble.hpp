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

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "solartwin/boosting.hpp"
#include "solartwin/dataset.hpp"

namespace solartwin {

// A multi-class probabilistic classifier over zero-based code vectors.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual int n_classes() const = 0;
  // Class probabilities summing to one.
  virtual Eigen::VectorXd predict_proba(std::span<const int> x) const = 0;

  int predict(std::span<const int> x) const;
};

// One binary booster per class; probabilities normalized across classes and
// the decision is their argmax.
class BoostedClassifier final : public Classifier {
 public:
  static BoostedClassifier train(const LabeledDataset& data, const GbtParams& params);

  int n_classes() const override { return static_cast<int>(per_class_.size()); }
  Eigen::VectorXd predict_proba(std::span<const int> x) const override;
  const std::vector<GbtModel>& models() const noexcept { return per_class_; }

 private:
  std::vector<GbtModel> per_class_;
};

// Predicts training-set class frequencies for every input.
class MajorityClassifier final : public Classifier {
 public:
  static MajorityClassifier train(const LabeledDataset& data);

  int n_classes() const override { return static_cast<int>(prior_.size()); }
  Eigen::VectorXd predict_proba(std::span<const int>) const override { return prior_; }

 private:
  Eigen::VectorXd prior_;
};

// Hard vote when a plurality of at least two members agrees on a single class;
// otherwise soft vote on summed probabilities, ties to the lowest class.
int ensemble_vote(std::span<const int> class_preds, std::span<const Eigen::VectorXd> class_probs);

class VotingEnsemble {
 public:
  explicit VotingEnsemble(std::vector<std::shared_ptr<const Classifier>> members);

  int predict(std::span<const int> x) const;
  Eigen::VectorXi predict(const CodeMatrix& x) const;
  std::size_t size() const noexcept { return members_.size(); }

 private:
  std::vector<std::shared_ptr<const Classifier>> members_;
};

struct SqftEnsembleConfig {
  GbtParams deep{50, 3, 0.3, 1.0, 1.0, 0.0};
  GbtParams shallow{80, 2, 0.2, 1.0, 1.0, 0.0};
};

// Two boosted members with different capacity plus the majority baseline.
VotingEnsemble train_sqft_ensemble(const LabeledDataset& data, const SqftEnsembleConfig& cfg = {});

}  // namespace solartwin
