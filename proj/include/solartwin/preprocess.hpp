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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "solartwin/dataset.hpp"

namespace solartwin {

enum class OversampleMethod {
  Smoten,
  // Duplicate minority rows chosen uniformly with replacement.
  Random,
};

// Upsamples every minority class to the majority count. Original rows come
// first, unchanged; synthetic rows follow grouped by ascending class.
//
// SMOTEN: a synthetic row copies, feature by feature, the mode of the k nearest
// same-class neighbours (Hamming distance, ties to the lower row index) of a
// uniformly chosen seed row. Mode ties go to the lowest code.
LabeledDataset smoten_oversample(const LabeledDataset& data, int k, std::uint64_t seed,
                                 OversampleMethod method = OversampleMethod::Smoten);

// Bias-uncorrected Cramer's V between two categorical columns, in [0, 1].
double cramers_v(std::span<const int> a, std::span<const int> b);

// Pairwise Cramer's V between all feature columns (and the label as the last
// column when include_label). Symmetric with unit diagonal.
Eigen::MatrixXd correlation_matrix(const LabeledDataset& data, bool include_label);

void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m, const std::vector<std::string>& names);

}  // namespace solartwin
