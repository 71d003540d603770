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

#include "solartwin/dataset.hpp"

#include <ostream>

#include <fmt/format.h>

#include "solartwin/csv.hpp"
#include "solartwin/error.hpp"
#include "solartwin/sqft.hpp"

namespace solartwin {

std::vector<Eigen::Index> LabeledDataset::class_counts() const {
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(n_classes), 0);
  for (Eigen::Index i = 0; i < y.size(); ++i) ++counts[static_cast<std::size_t>(y(i))];
  return counts;
}

void LabeledDataset::validate() const {
  if (x.rows() != y.size()) throw DomainError("dataset: feature rows and labels differ in length");
  if (static_cast<std::size_t>(x.cols()) != domains.size()) throw DomainError("dataset: domain count mismatch");
  if (n_classes < 1) throw DomainError("dataset: need at least one class");
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      if (x(i, j) < 0 || x(i, j) >= domains[static_cast<std::size_t>(j)])
        throw DomainError(fmt::format("dataset row {}: code {} outside domain of feature {}", i, x(i, j), j));
    if (y(i) < 0 || y(i) >= n_classes) throw DomainError(fmt::format("dataset row {}: label {} out of range", i, y(i)));
  }
}

std::vector<int> feature_domains(const DatasetOptions& options) {
  std::vector<int> d;
  for (const auto& dom : options.schema.domains) d.push_back(dom.size());
  if (options.include_sqft_class) d.push_back(kSqftClassCount);
  return d;
}

std::vector<std::string> dataset_feature_names(const DatasetOptions& options) {
  std::vector<std::string> names(kFeatureNames.begin(), kFeatureNames.end());
  if (options.include_sqft_class) names.emplace_back("sqft_class");
  return names;
}

namespace {

void fill_row(CodeMatrix& x, Eigen::Index row, const HouseholdRecord& h, const DatasetOptions& options) {
  for (std::size_t f = 0; f < kFeatureCount; ++f)
    x(row, static_cast<Eigen::Index>(f)) = h.features[f] - options.schema.domains[f].min;
  if (options.include_sqft_class) {
    if (!h.sqft_class) throw DomainError(fmt::format("household {} has no sqft_class", h.id));
    x(row, static_cast<Eigen::Index>(kFeatureCount)) = *h.sqft_class;
  }
}

}  // namespace

CodeMatrix feature_matrix(const HouseholdTable& table, const DatasetOptions& options) {
  const auto cols = static_cast<Eigen::Index>(kFeatureCount + (options.include_sqft_class ? 1 : 0));
  CodeMatrix x(static_cast<Eigen::Index>(table.size()), cols);
  for (std::size_t i = 0; i < table.size(); ++i) fill_row(x, static_cast<Eigen::Index>(i), table[i], options);
  return x;
}

LabeledDataset make_dataset(const HouseholdTable& table, const DatasetOptions& options) {
  std::vector<const HouseholdRecord*> labeled;
  for (const auto& h : table) {
    const bool has = options.label == LabelColumn::Solar ? h.solar.has_value() : h.sqft_class.has_value();
    if (has) labeled.push_back(&h);
  }
  LabeledDataset d;
  d.domains = feature_domains(options);
  d.feature_names = dataset_feature_names(options);
  d.n_classes = options.label == LabelColumn::Solar ? 2 : kSqftClassCount;
  d.x.resize(static_cast<Eigen::Index>(labeled.size()), static_cast<Eigen::Index>(d.domains.size()));
  d.y.resize(static_cast<Eigen::Index>(labeled.size()));
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    fill_row(d.x, row, *labeled[i], options);
    d.y(row) = options.label == LabelColumn::Solar ? (*labeled[i]->solar ? 1 : 0) : *labeled[i]->sqft_class;
  }
  return d;
}

void write_dataset(std::ostream& out, const LabeledDataset& data) {
  for (const auto& name : data.feature_names) out << name << ',';
  out << "label\n";
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) out << data.x(i, j) << ',';
    out << data.y(i) << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const LabeledDataset& data) {
  auto out = csv::open_output(path);
  write_dataset(out, data);
}

}  // namespace solartwin
