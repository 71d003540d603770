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

#include "solartwin/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "solartwin/error.hpp"

namespace solartwin {

int Classifier::predict(std::span<const int> x) const {
  const Eigen::VectorXd p = predict_proba(x);
  Eigen::Index best = 0;
  p.maxCoeff(&best);
  return static_cast<int>(best);
}

BoostedClassifier BoostedClassifier::train(const LabeledDataset& data, const GbtParams& params) {
  data.validate();
  BoostedClassifier out;
  const auto counts = data.class_counts();
  for (int c = 0; c < data.n_classes; ++c) {
    const auto count = counts[static_cast<std::size_t>(c)];
    if (count == 0 || count == data.rows()) {
      // Class absent (or the only one): a constant model at the clamped extreme.
      GbtModel constant;
      constant.domains = data.domains;
      constant.learning_rate = params.learning_rate;
      constant.base_score = count == 0 ? -30.0 : 30.0;
      out.per_class_.push_back(std::move(constant));
      continue;
    }
    const Eigen::VectorXi target = (data.y.array() == c).cast<int>();
    out.per_class_.push_back(train_gbt(data.x, target, data.domains, params, LogisticLoss{}));
  }
  return out;
}

Eigen::VectorXd BoostedClassifier::predict_proba(std::span<const int> x) const {
  Eigen::VectorXd p(static_cast<Eigen::Index>(per_class_.size()));
  for (std::size_t c = 0; c < per_class_.size(); ++c) p(static_cast<Eigen::Index>(c)) = per_class_[c].predict_proba(x);
  const double total = p.sum();
  if (total > 0.0) p /= total;
  else p.setConstant(1.0 / static_cast<double>(p.size()));
  return p;
}

MajorityClassifier MajorityClassifier::train(const LabeledDataset& data) {
  data.validate();
  if (data.rows() == 0) throw DomainError("majority classifier: empty training set");
  MajorityClassifier out;
  out.prior_ = Eigen::VectorXd::Zero(data.n_classes);
  for (Eigen::Index i = 0; i < data.rows(); ++i) out.prior_(data.y(i)) += 1.0;
  out.prior_ /= static_cast<double>(data.rows());
  return out;
}

int ensemble_vote(std::span<const int> class_preds, std::span<const Eigen::VectorXd> class_probs) {
  if (class_preds.size() < 2) throw DomainError("ensemble_vote: need at least two members");
  if (class_probs.size() != class_preds.size()) throw DomainError("ensemble_vote: prediction/probability count mismatch");
  const Eigen::Index k = class_probs.front().size();
  for (const auto& p : class_probs) {
    if (p.size() != k) throw DomainError("ensemble_vote: members disagree on the class set");
    if (std::abs(p.sum() - 1.0) > 1e-9) throw DomainError("ensemble_vote: probability vector does not sum to 1");
  }

  std::vector<int> votes(static_cast<std::size_t>(k), 0);
  for (int c : class_preds) {
    if (c < 0 || c >= k) throw DomainError(fmt::format("ensemble_vote: class {} out of range", c));
    ++votes[static_cast<std::size_t>(c)];
  }
  const int top = *std::ranges::max_element(votes);
  if (top >= 2 && std::ranges::count(votes, top) == 1)
    return static_cast<int>(std::ranges::max_element(votes) - votes.begin());

  Eigen::VectorXd summed = Eigen::VectorXd::Zero(k);
  for (const auto& p : class_probs) summed += p;
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < k; ++c)
    if (summed(c) > summed(best)) best = c;
  return static_cast<int>(best);
}

VotingEnsemble::VotingEnsemble(std::vector<std::shared_ptr<const Classifier>> members) : members_(std::move(members)) {
  if (members_.size() < 2) throw DomainError("voting ensemble: need at least two members");
  for (const auto& m : members_)
    if (m->n_classes() != members_.front()->n_classes())
      throw DomainError("voting ensemble: members disagree on the class set");
}

int VotingEnsemble::predict(std::span<const int> x) const {
  std::vector<int> preds;
  std::vector<Eigen::VectorXd> probs;
  for (const auto& m : members_) {
    probs.push_back(m->predict_proba(x));
    Eigen::Index best = 0;
    probs.back().maxCoeff(&best);
    preds.push_back(static_cast<int>(best));
  }
  return ensemble_vote(preds, probs);
}

Eigen::VectorXi VotingEnsemble::predict(const CodeMatrix& x) const {
  Eigen::VectorXi out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    out(i) = predict(std::span<const int>(x.row(i).data(), static_cast<std::size_t>(x.cols())));
  return out;
}

VotingEnsemble train_sqft_ensemble(const LabeledDataset& data, const SqftEnsembleConfig& cfg) {
  return VotingEnsemble({std::make_shared<BoostedClassifier>(BoostedClassifier::train(data, cfg.deep)),
                         std::make_shared<BoostedClassifier>(BoostedClassifier::train(data, cfg.shallow)),
                         std::make_shared<MajorityClassifier>(MajorityClassifier::train(data))});
}

}  // namespace solartwin
