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

#include "solartwin/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "solartwin/csv.hpp"
#include "solartwin/error.hpp"

namespace solartwin {

namespace {

double clamp_prob(double p) { return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon); }

}  // namespace

double weighted_log_loss(std::span<const int> y, std::span<const double> p, double beta) {
  if (y.size() != p.size()) throw DomainError("weighted_log_loss: label and probability lengths differ");
  if (y.empty()) throw DomainError("weighted_log_loss: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double q = clamp_prob(p[i]);
    sum += y[i] * std::log(q) + beta * (1 - y[i]) * std::log(1.0 - q);
  }
  return -sum / static_cast<double>(y.size());
}

GradHess loss_grad_hess(int y, double p, double beta) {
  const double weight = y + beta * (1 - y);
  return {p * weight - y, p * (1.0 - p) * weight};
}

double WeightedLogisticLoss::value(int y, double p) const {
  const double q = clamp_prob(p);
  return -(y * std::log(q) + beta * (1 - y) * std::log(1.0 - q));
}

double LogisticLoss::value(int y, double p) const {
  const double q = clamp_prob(p);
  return -(y * std::log(q) + (1 - y) * std::log(1.0 - q));
}

void LossParams::validate() const {
  if (!std::isfinite(beta) || beta < 0.0) throw DomainError(fmt::format("beta {} must be finite and >= 0", beta));
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError(fmt::format("tau {} must lie strictly inside (0, 1)", tau));
}

void GbtParams::validate() const {
  if (rounds < 0) throw ConfigError("gbt.rounds must be >= 0");
  if (max_depth < 0) throw ConfigError("gbt.max_depth must be >= 0");
  if (!(learning_rate > 0.0)) throw ConfigError("gbt.learning_rate must be > 0");
  if (!(lambda >= 0.0)) throw ConfigError("gbt.lambda must be >= 0");
  if (!(min_child_weight >= 0.0)) throw ConfigError("gbt.min_child_weight must be >= 0");
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double RegressionTree::predict(const int* x) const {
  int k = 0;
  while (!nodes[static_cast<std::size_t>(k)].is_leaf()) {
    const auto& n = nodes[static_cast<std::size_t>(k)];
    k = x[n.feature] <= n.split_code ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(k)].value;
}

double GbtModel::margin(std::span<const int> x) const {
  if (x.size() != domains.size())
    throw DomainError(fmt::format("predict: expected {} features, got {}", domains.size(), x.size()));
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] < 0 || x[j] >= domains[j])
      throw DomainError(fmt::format("predict: feature {} code {} outside [0, {})", j, x[j], domains[j]));
  double m = base_score;
  for (const auto& t : trees) m += t.predict(x.data());
  return m;
}

double GbtModel::predict_proba(std::span<const int> x) const { return sigmoid(margin(x)); }

Eigen::VectorXd GbtModel::predict_proba(const CodeMatrix& x) const {
  Eigen::VectorXd p(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    p(i) = predict_proba(std::span<const int>(x.row(i).data(), static_cast<std::size_t>(x.cols())));
  return p;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const CodeMatrix& x, const std::vector<int>& domains, const GbtParams& params,
              const std::vector<double>& grad, const std::vector<double>& hess)
      : x_(x), domains_(domains), params_(params), grad_(grad), hess_(hess) {}

  RegressionTree build(std::vector<Eigen::Index> rows) {
    tree_.nodes.clear();
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<Eigen::Index> rows, int depth) {
    double g = 0.0, h = 0.0;
    for (auto i : rows) {
      g += grad_[static_cast<std::size_t>(i)];
      h += hess_[static_cast<std::size_t>(i)];
    }
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();

    int best_feature = -1, best_code = 0;
    double best_gain = 0.0;
    if (depth < params_.max_depth && rows.size() >= 2) {
      const double parent = g * g / (h + params_.lambda);
      for (std::size_t j = 0; j < domains_.size(); ++j) {
        const auto dom = static_cast<std::size_t>(domains_[j]);
        hist_g_.assign(dom, 0.0);
        hist_h_.assign(dom, 0.0);
        for (auto i : rows) {
          const auto c = static_cast<std::size_t>(x_(i, static_cast<Eigen::Index>(j)));
          hist_g_[c] += grad_[static_cast<std::size_t>(i)];
          hist_h_[c] += hess_[static_cast<std::size_t>(i)];
        }
        double gl = 0.0, hl = 0.0;
        for (std::size_t c = 0; c + 1 < dom; ++c) {
          gl += hist_g_[c];
          hl += hist_h_[c];
          const double gr = g - gl, hr = h - hl;
          if (hl < params_.min_child_weight || hr < params_.min_child_weight) continue;
          const double gain = 0.5 * (gl * gl / (hl + params_.lambda) + gr * gr / (hr + params_.lambda) - parent);
          if (gain > best_gain + 1e-12) {
            best_gain = gain;
            best_feature = static_cast<int>(j);
            best_code = static_cast<int>(c);
          }
        }
      }
    }

    if (best_feature < 0) {
      tree_.nodes[static_cast<std::size_t>(id)].value = -g / (h + params_.lambda) * params_.learning_rate;
      return id;
    }

    std::vector<Eigen::Index> left, right;
    for (auto i : rows) (x_(i, best_feature) <= best_code ? left : right).push_back(i);
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    auto& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.split_code = best_code;
    node.left = l;
    node.right = r;
    return id;
  }

  const CodeMatrix& x_;
  const std::vector<int>& domains_;
  const GbtParams& params_;
  const std::vector<double>& grad_;
  const std::vector<double>& hess_;
  RegressionTree tree_;
  std::vector<double> hist_g_, hist_h_;
};

}  // namespace

GbtModel train_gbt_with(const CodeMatrix& x, const Eigen::VectorXi& y, const std::vector<int>& domains,
                        const GbtParams& params, const std::function<GradHess(int, double)>& grad_hess,
                        const std::function<double(int, double)>& loss_value, std::vector<double>* loss_trace) {
  params.validate();
  if (x.rows() != y.size()) throw DomainError("train_gbt: feature rows and labels differ in length");
  if (static_cast<std::size_t>(x.cols()) != domains.size()) throw DomainError("train_gbt: domain count mismatch");
  Eigen::Index positives = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) != 0 && y(i) != 1) throw DomainError(fmt::format("train_gbt: label {} is not binary", y(i)));
    positives += y(i);
  }
  if (positives == 0 || positives == y.size())
    throw DomainError("train_gbt: training data holds a single class; need examples of both");
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      if (x(i, j) < 0 || x(i, j) >= domains[static_cast<std::size_t>(j)])
        throw DomainError(fmt::format("train_gbt: row {} feature {} code {} out of domain", i, j, x(i, j)));

  GbtModel model;
  model.learning_rate = params.learning_rate;
  model.base_score = params.base_score;
  model.domains = domains;

  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<double> margin(n, params.base_score), grad(n), hess(n);
  std::vector<Eigen::Index> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Eigen::Index>(i);

  TreeBuilder builder(x, domains, params, grad, hess);
  for (int round = 0; round < params.rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto gh = grad_hess(y(static_cast<Eigen::Index>(i)), sigmoid(margin[i]));
      grad[i] = gh.grad;
      hess[i] = gh.hess;
    }
    auto tree = builder.build(all);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      margin[i] += tree.predict(x.row(static_cast<Eigen::Index>(i)).data());
      if (loss_trace) loss += loss_value(y(static_cast<Eigen::Index>(i)), sigmoid(margin[i]));
    }
    if (loss_trace) loss_trace->push_back(loss / static_cast<double>(n));
    model.trees.push_back(std::move(tree));
  }
  return model;
}

GbtModel train_gbt(const LabeledDataset& data, const GbtParams& params, const LossParams& loss, std::uint64_t) {
  loss.validate();
  if (data.n_classes != 2) throw DomainError("train_gbt: binary dataset expected");
  return train_gbt(data.x, data.y, data.domains, params, WeightedLogisticLoss{loss.beta});
}

void write_model(std::ostream& out, const GbtModel& model) {
  out << "solartwin-gbt 1\n";
  out << "base_score " << csv::format_number(model.base_score) << '\n';
  out << "learning_rate " << csv::format_number(model.learning_rate) << '\n';
  out << "domains " << model.domains.size();
  for (int d : model.domains) out << ' ' << d;
  out << "\ntrees " << model.trees.size() << '\n';
  for (const auto& t : model.trees) {
    out << "tree " << t.nodes.size() << '\n';
    for (const auto& n : t.nodes)
      out << n.feature << ' ' << n.split_code << ' ' << n.left << ' ' << n.right << ' ' << csv::format_number(n.value)
          << '\n';
  }
}

GbtModel read_model(std::istream& in) {
  auto fail = [](const std::string& what) { return IngestError(fmt::format("model file: {}", what)); };
  auto expect = [&](std::string_view keyword) {
    std::string word;
    if (!(in >> word) || word != keyword) throw fail(fmt::format("expected '{}', found '{}'", keyword, word));
  };
  auto number = [&] {
    std::string tok;
    in >> tok;
    auto v = csv::parse_number(tok);
    if (!v) throw fail(fmt::format("invalid number '{}'", tok));
    return *v;
  };
  auto integer = [&] {
    std::string tok;
    in >> tok;
    auto v = csv::parse_integer(tok);
    if (!v) throw fail(fmt::format("invalid integer '{}'", tok));
    return *v;
  };

  expect("solartwin-gbt");
  if (const auto version = integer(); version != 1) throw fail(fmt::format("unsupported version {}", version));
  GbtModel m;
  expect("base_score");
  m.base_score = number();
  expect("learning_rate");
  m.learning_rate = number();
  expect("domains");
  const auto nd = integer();
  if (nd < 0) throw fail("negative domain count");
  for (std::int64_t j = 0; j < nd; ++j) m.domains.push_back(static_cast<int>(integer()));
  expect("trees");
  const auto nt = integer();
  if (nt < 0) throw fail("negative tree count");
  for (std::int64_t t = 0; t < nt; ++t) {
    expect("tree");
    const auto nn = integer();
    if (nn < 1) throw fail("tree without nodes");
    RegressionTree tree;
    for (std::int64_t k = 0; k < nn; ++k) {
      TreeNode node;
      node.feature = static_cast<int>(integer());
      node.split_code = static_cast<int>(integer());
      node.left = static_cast<int>(integer());
      node.right = static_cast<int>(integer());
      node.value = number();
      if (!node.is_leaf()) {
        if (node.feature >= nd || node.left <= k || node.right <= k || node.left >= nn || node.right >= nn)
          throw fail(fmt::format("tree {} node {} has invalid links", t, k));
      }
      tree.nodes.push_back(node);
    }
    m.trees.push_back(std::move(tree));
  }
  return m;
}

}  // namespace solartwin
