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

#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "solartwin/boosting.hpp"
#include "solartwin/ensemble.hpp"
#include "solartwin/toygen.hpp"
#include "support.hpp"

using namespace solartwin;
using solartwin::testing::contains;
using solartwin::testing::error_of;
using solartwin::testing::Gen;

namespace {

long double loss_ld(int y, long double z, long double beta) {
  const long double p = 1.0L / (1.0L + std::exp(-z));
  return -(y * std::log(p) + beta * (1 - y) * std::log(1.0L - p));
}

LabeledDataset random_binary(Gen& g, int n, int features, int domain) {
  LabeledDataset d;
  d.x.resize(n, features);
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    int s = 0;
    for (int j = 0; j < features; ++j) {
      d.x(i, j) = g.integer(0, domain - 1);
      s += d.x(i, j);
    }
    d.y(i) = (s + g.integer(-2, 2)) > features * (domain - 1) / 2 ? 1 : 0;
  }
  d.domains.assign(static_cast<std::size_t>(features), domain);
  for (int j = 0; j < features; ++j) d.feature_names.push_back("f" + std::to_string(j));
  return d;
}

}  // namespace

TEST_CASE("weighted log loss: reference values") {
  const int y1[] = {1};
  const double p1[] = {1.0 - 1e-12};
  CHECK(weighted_log_loss(y1, p1, 3.0) == doctest::Approx(0.0).epsilon(1e-9));

  const int y0[] = {0};
  const double half[] = {0.5};
  CHECK(weighted_log_loss(y0, half, 2.0) == doctest::Approx(1.386294).epsilon(1e-6));

  // Clamping keeps p = 0 and p = 1 finite.
  const double zero[] = {0.0};
  CHECK(std::isfinite(weighted_log_loss(y1, zero, 1.0)));
  CHECK(weighted_log_loss(y1, zero, 1.0) == doctest::Approx(-std::log(1e-12)));
}

TEST_CASE("weighted log loss: beta = 1 is binary cross-entropy") {
  Gen g(1);
  std::vector<int> y;
  std::vector<double> p;
  double bce = 0.0;
  for (int i = 0; i < 200; ++i) {
    y.push_back(g.coin() ? 1 : 0);
    p.push_back(g.uniform(0.01, 0.99));
    bce += -(y.back() * std::log(p.back()) + (1 - y.back()) * std::log(1 - p.back()));
  }
  CHECK(weighted_log_loss(y, p, 1.0) == doctest::Approx(bce / 200.0).epsilon(1e-12));
}

TEST_CASE("grad/hess: closed-form examples") {
  const auto gh = loss_grad_hess(0, 0.5, 2.0);
  CHECK(gh.grad == doctest::Approx(1.0));
  CHECK(gh.hess == doctest::Approx(0.5));
  for (double p : {0.1, 0.4, 0.9})
    for (double beta : {0.0, 0.7, 2.0}) CHECK(loss_grad_hess(1, p, beta).grad == doctest::Approx(p - 1.0));
  for (double p : {0.2, 0.8}) {
    const auto a = loss_grad_hess(0, p, 1.0);
    const auto b = LogisticLoss{}.grad_hess(0, p);
    CHECK(a.grad == b.grad);
    CHECK(a.hess == b.hess);
  }
}

TEST_CASE("grad/hess: central finite differences over a (y, p, beta) grid") {
  // Five-point stencils on the long-double loss keep both truncation and rounding below 1e-10.
  const long double h = 1e-3L;
  int checked = 0;
  for (int y : {0, 1})
    for (int k = 1; k <= 10; ++k)
      for (double beta : {0.0, 0.5, 1.0, 1.5, 2.0}) {
        const double p = k / 11.0;
        const long double z = std::log(static_cast<long double>(p) / (1.0L - p));
        long double f[5];
        for (int s = -2; s <= 2; ++s) f[s + 2] = loss_ld(y, z + s * h, beta);
        const auto grad_fd = static_cast<double>((f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h));
        const auto hess_fd = static_cast<double>((-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h));
        const auto gh = loss_grad_hess(y, p, beta);
        CHECK(std::abs(gh.grad - grad_fd) <= 1e-6 * std::abs(grad_fd));
        CHECK(std::abs(gh.hess - hess_fd) <= 1e-6 * std::max(std::abs(hess_fd), 1e-12));
        CHECK(gh.hess >= 0.0);
        ++checked;
      }
  CHECK(checked == 100);
}

TEST_CASE("apply_threshold: inclusive and monotone") {
  CHECK(apply_threshold(0.6, 0.5) == 1);
  CHECK(apply_threshold(0.5, 0.5) == 1);
  CHECK(apply_threshold(0.3, 0.95) == 0);
  Gen g(4);
  for (int i = 0; i < 200; ++i) {
    const double p = g.uniform(0, 1), q = g.uniform(0, 1), tau = g.uniform(0.01, 0.99), tau2 = g.uniform(0.01, 0.99);
    if (p <= q) CHECK(apply_threshold(p, tau) <= apply_threshold(q, tau));
    if (tau <= tau2) CHECK(apply_threshold(p, tau) >= apply_threshold(p, tau2));
  }
}

TEST_CASE("loss params validation") {
  CHECK_THROWS_AS((LossParams{-0.1, 0.5}.validate()), DomainError);
  CHECK_THROWS_AS((LossParams{1.0, 0.0}.validate()), DomainError);
  CHECK_THROWS_AS((LossParams{1.0, 1.0}.validate()), DomainError);
  CHECK_NOTHROW(LossParams{0.0, 0.05}.validate());
}

TEST_CASE("gbt: separable data is fit perfectly within 50 rounds") {
  LabeledDataset d;
  // Every (a, b) cell appears 8 times so leaves clear the minimum child weight.
  const int n = 320;
  d.x.resize(n, 2);
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    d.x(i, 0) = i % 8;
    d.x(i, 1) = (i / 8) % 5;
    d.y(i) = d.x(i, 0) + d.x(i, 1) >= 6 ? 1 : 0;
  }
  d.domains = {8, 5};
  d.feature_names = {"a", "b"};
  GbtParams params;
  params.rounds = 50;
  const auto model = train_gbt(d, params, LossParams{});
  int correct = 0;
  for (int i = 0; i < n; ++i) {
    const int row[] = {d.x(i, 0), d.x(i, 1)};
    correct += apply_threshold(model.predict_proba(row), 0.5) == d.y(i) ? 1 : 0;
  }
  CHECK(correct == n);
}

TEST_CASE("gbt: zero rounds predict the base score") {
  Gen g(8);
  const auto d = random_binary(g, 50, 3, 4);
  GbtParams params;
  params.rounds = 0;
  const auto model = train_gbt(d, params, LossParams{});
  const int row[] = {1, 2, 3};
  CHECK(model.predict_proba(row) == 0.5);
  params.base_score = 1.0;
  CHECK(train_gbt(d, params, LossParams{}).predict_proba(row) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
}

TEST_CASE("gbt: training loss never increases and training is deterministic") {
  Gen g(21);
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = random_binary(g, 120, 4, 5);
    const double beta = g.uniform(0.0, 2.0);
    GbtParams params;
    params.rounds = 30;
    std::vector<double> trace;
    const auto model = train_gbt(d.x, d.y, d.domains, params, WeightedLogisticLoss{beta}, &trace);
    REQUIRE(trace.size() == 30);
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-12);
    CHECK(model == train_gbt(d.x, d.y, d.domains, params, WeightedLogisticLoss{beta}));
  }
}

TEST_CASE("gbt: beta = 1 grows the same trees as plain logistic boosting") {
  ToyConfig cfg;
  cfg.n_households = 600;
  DatasetOptions opts;
  opts.include_sqft_class = true;
  const auto d = make_dataset(gen_population(cfg), opts);
  GbtParams params;
  const auto weighted = train_gbt(d.x, d.y, d.domains, params, WeightedLogisticLoss{1.0});
  const auto plain = train_gbt(d.x, d.y, d.domains, params, LogisticLoss{});
  CHECK(weighted == plain);
  CHECK(train_gbt(d, params, LossParams{1.0, 0.5}, 123) == plain);
}

TEST_CASE("gbt: larger beta lowers predicted probabilities") {
  Gen g(31);
  const auto d = random_binary(g, 200, 3, 5);
  GbtParams params;
  params.rounds = 20;
  const auto low = train_gbt(d, params, LossParams{0.5, 0.5});
  const auto high = train_gbt(d, params, LossParams{2.0, 0.5});
  CHECK(low.predict_proba(d.x).mean() > high.predict_proba(d.x).mean());
}

TEST_CASE("gbt: errors") {
  Gen g(2);
  auto d = random_binary(g, 30, 2, 3);
  d.y.setZero();
  CHECK(contains(error_of([&] { train_gbt(d, GbtParams{}, LossParams{}); }), "single class"));

  auto ok = random_binary(g, 60, 2, 3);
  const auto model = train_gbt(ok, GbtParams{}, LossParams{});
  const int bad[] = {1, 3};
  CHECK(contains(error_of([&] { model.predict_proba(bad); }), "feature 1 code 3"));
}

TEST_CASE("gbt: text serialization round trip") {
  Gen g(12);
  const auto d = random_binary(g, 80, 3, 4);
  const auto model = train_gbt(d, GbtParams{}, LossParams{1.3, 0.4});
  std::stringstream ss;
  write_model(ss, model);
  CHECK(ss.str().rfind("solartwin-gbt 1\n", 0) == 0);
  const auto back = read_model(ss);
  CHECK(back == model);
  CHECK(back.predict_proba(d.x) == model.predict_proba(d.x));

  std::istringstream wrong("solartwin-gbt 2\n");
  CHECK(contains(error_of([&] { read_model(wrong); }), "unsupported version 2"));
}

TEST_CASE("ensemble_vote: hard and soft votes") {
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  {
    const int preds[] = {0, 0, 1};
    const Eigen::VectorXd probs[] = {uniform, uniform, uniform};
    CHECK(ensemble_vote(preds, probs) == 0);
  }
  {
    Eigen::VectorXd a(3), b(3), c(3);
    a << 0.6, 0.2, 0.2;
    b << 0.1, 0.5, 0.4;
    c << 0.2, 0.3, 0.5;
    const int preds[] = {0, 1, 2};
    const Eigen::VectorXd probs[] = {a, b, c};
    CHECK(ensemble_vote(preds, probs) == 2);
  }
  {
    const int preds[] = {1, 1};
    const Eigen::VectorXd probs[] = {uniform, uniform};
    CHECK(ensemble_vote(preds, probs) == 1);
  }
  {
    // All disagree with tied sums: lowest class wins.
    const int preds[] = {0, 1, 2};
    const Eigen::VectorXd probs[] = {uniform, uniform, uniform};
    CHECK(ensemble_vote(preds, probs) == 0);
  }
  {
    Eigen::VectorXd bad(2);
    bad << 0.7, 0.7;
    const int preds[] = {0, 1};
    const Eigen::VectorXd probs[] = {bad, bad};
    CHECK_THROWS(ensemble_vote(preds, probs));
  }
}

TEST_CASE("boosted one-vs-rest classifier and sqft ensemble") {
  ToyConfig cfg;
  cfg.n_households = 800;
  DatasetOptions opts;
  opts.label = LabelColumn::SqftClass;
  const auto d = make_dataset(gen_population(cfg), opts);
  GbtParams params;
  params.rounds = 30;
  const auto clf = BoostedClassifier::train(d, params);
  CHECK(clf.n_classes() == 8);
  int correct = 0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    const std::span<const int> row(d.x.row(i).data(), static_cast<std::size_t>(d.cols()));
    const auto p = clf.predict_proba(row);
    CHECK(p.sum() == doctest::Approx(1.0));
    correct += clf.predict(row) == d.y(i) ? 1 : 0;
  }
  const auto counts = d.class_counts();
  const auto majority = *std::max_element(counts.begin(), counts.end());
  CHECK(correct > majority);

  const auto ensemble = train_sqft_ensemble(d);
  CHECK(ensemble.size() == 3);
  const Eigen::VectorXi pred = ensemble.predict(d.x);
  CHECK(pred.minCoeff() >= 0);
  CHECK(pred.maxCoeff() < 8);
  CHECK(pred == train_sqft_ensemble(d).predict(d.x));
}

TEST_CASE("majority classifier returns class frequencies") {
  LabeledDataset d;
  d.x.resize(4, 1);
  d.x << 0, 1, 0, 1;
  d.y.resize(4);
  d.y << 2, 2, 0, 2;
  d.domains = {2};
  d.feature_names = {"a"};
  d.n_classes = 3;
  const auto m = MajorityClassifier::train(d);
  const int row[] = {0};
  const auto p = m.predict_proba(row);
  CHECK(p(0) == doctest::Approx(0.25));
  CHECK(p(1) == 0.0);
  CHECK(p(2) == doctest::Approx(0.75));
  CHECK(m.predict(row) == 2);
}
