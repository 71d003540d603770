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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "solartwin/core_data.hpp"

namespace solartwin {

using CodeMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Rows of zero-based categorical codes with a class label per row. Feature j
// takes codes in [0, domains[j]).
struct LabeledDataset {
  CodeMatrix x;
  Eigen::VectorXi y;
  std::vector<int> domains;
  std::vector<std::string> feature_names;
  int n_classes = 2;

  Eigen::Index rows() const noexcept { return x.rows(); }
  Eigen::Index cols() const noexcept { return x.cols(); }
  // Per-class row counts, indexed by class.
  std::vector<Eigen::Index> class_counts() const;
  // Throws DomainError when shapes disagree or a code/label leaves its domain.
  void validate() const;
};

// Which household attribute becomes the label.
enum class LabelColumn { Solar, SqftClass };

struct DatasetOptions {
  LabelColumn label = LabelColumn::Solar;
  // Append sqft_class as a ninth feature (the adoption model uses it).
  bool include_sqft_class = false;
  FeatureSchema schema;
};

// Feature matrix for a table; codes shifted to start at zero.
CodeMatrix feature_matrix(const HouseholdTable& table, const DatasetOptions& options);
// Feature matrix plus labels. Households lacking the label are skipped.
LabeledDataset make_dataset(const HouseholdTable& table, const DatasetOptions& options);
std::vector<int> feature_domains(const DatasetOptions& options);
std::vector<std::string> dataset_feature_names(const DatasetOptions& options);

// <feature names...>,label
void write_dataset(std::ostream& out, const LabeledDataset& data);
void save_dataset(const std::filesystem::path& path, const LabeledDataset& data);

}  // namespace solartwin
