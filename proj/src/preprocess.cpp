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

#include "solartwin/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "solartwin/csv.hpp"
#include "solartwin/error.hpp"
#include "solartwin/rng.hpp"

namespace solartwin {

namespace {

int hamming(const CodeMatrix& x, Eigen::Index a, Eigen::Index b) {
  return static_cast<int>((x.row(a).array() != x.row(b).array()).count());
}

// k nearest neighbours of each row within `members`, as positions into `members`.
std::vector<std::vector<std::size_t>> nearest_neighbours(const CodeMatrix& x, std::span<const Eigen::Index> members,
                                                         int k) {
  std::vector<std::vector<std::size_t>> out(members.size());
  std::vector<std::pair<int, std::size_t>> dist;
  for (std::size_t i = 0; i < members.size(); ++i) {
    dist.clear();
    for (std::size_t j = 0; j < members.size(); ++j)
      if (j != i) dist.emplace_back(hamming(x, members[i], members[j]), j);
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    for (int n = 0; n < k; ++n) out[i].push_back(dist[static_cast<std::size_t>(n)].second);
  }
  return out;
}

}  // namespace

LabeledDataset smoten_oversample(const LabeledDataset& data, int k, std::uint64_t seed, OversampleMethod method) {
  data.validate();
  if (k < 1) throw DomainError("smoten: k must be >= 1");
  const auto counts = data.class_counts();
  const auto present = std::ranges::count_if(counts, [](auto c) { return c > 0; });
  if (present < 2) throw DomainError("smoten: need at least two classes present");
  const Eigen::Index majority = *std::ranges::max_element(counts);

  std::vector<std::pair<Eigen::Index, int>> plan;  // (rows needed, class)
  Eigen::Index extra = 0;
  for (int c = 0; c < data.n_classes; ++c) {
    const auto count = counts[static_cast<std::size_t>(c)];
    if (count == 0 || count == majority) continue;
    if (method == OversampleMethod::Smoten && count <= k)
      throw DomainError(fmt::format("smoten: class {} has {} rows, need more than k={}; use a smaller k", c, count, k));
    plan.emplace_back(majority - count, c);
    extra += majority - count;
  }

  LabeledDataset out = data;
  if (extra == 0) return out;
  out.x.conservativeResize(data.rows() + extra, data.cols());
  out.y.conservativeResize(data.rows() + extra);

  Rng rng(seed);
  Eigen::Index next = data.rows();
  for (const auto& [needed, cls] : plan) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index i = 0; i < data.rows(); ++i)
      if (data.y(i) == cls) members.push_back(i);

    if (method == OversampleMethod::Random) {
      for (Eigen::Index s = 0; s < needed; ++s, ++next) {
        out.x.row(next) = data.x.row(members[rng.below(members.size())]);
        out.y(next) = cls;
      }
      continue;
    }

    const auto neighbours = nearest_neighbours(data.x, members, k);
    std::vector<int> tally;
    for (Eigen::Index s = 0; s < needed; ++s, ++next) {
      const auto& nn = neighbours[rng.below(members.size())];
      for (Eigen::Index j = 0; j < data.cols(); ++j) {
        tally.assign(static_cast<std::size_t>(data.domains[static_cast<std::size_t>(j)]), 0);
        for (auto pos : nn) ++tally[static_cast<std::size_t>(data.x(members[pos], j))];
        // max_element returns the first maximum, i.e. the lowest code.
        out.x(next, j) = static_cast<int>(std::ranges::max_element(tally) - tally.begin());
      }
      out.y(next) = cls;
    }
  }
  return out;
}

double cramers_v(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw DomainError(fmt::format("cramers_v: length mismatch {} vs {}", a.size(), b.size()));
  if (a.size() < 2) throw DomainError("cramers_v: need at least two observations");

  auto index_of = [](std::span<const int> col) {
    std::map<int, Eigen::Index> idx;
    for (int v : col) idx.emplace(v, 0);
    Eigen::Index next = 0;
    for (auto& [v, i] : idx) i = next++;
    return idx;
  };
  const auto ia = index_of(a);
  const auto ib = index_of(b);
  const auto r = static_cast<Eigen::Index>(ia.size());
  const auto c = static_cast<Eigen::Index>(ib.size());
  const Eigen::Index dof = std::min(r - 1, c - 1);
  if (dof == 0) return 0.0;

  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(r, c);
  for (std::size_t i = 0; i < a.size(); ++i) table(ia.at(a[i]), ib.at(b[i])) += 1.0;
  const double n = static_cast<double>(a.size());
  const Eigen::MatrixXd expected = table.rowwise().sum() * table.colwise().sum() / n;
  const double chi2 = ((table - expected).array().square() / expected.array()).sum();
  return std::clamp(std::sqrt(chi2 / (n * static_cast<double>(dof))), 0.0, 1.0);
}

Eigen::MatrixXd correlation_matrix(const LabeledDataset& data, bool include_label) {
  if (data.rows() == 0) throw DomainError("correlation_matrix: empty dataset");
  const Eigen::Index m = data.cols() + (include_label ? 1 : 0);
  std::vector<std::vector<int>> columns(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    const Eigen::VectorXi col = data.x.col(j);
    columns[static_cast<std::size_t>(j)].assign(col.data(), col.data() + col.size());
  }
  if (include_label) columns.back().assign(data.y.data(), data.y.data() + data.y.size());

  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(m, m);
  if (data.rows() < 2) return v;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j)
      v(i, j) = v(j, i) = cramers_v(columns[static_cast<std::size_t>(i)], columns[static_cast<std::size_t>(j)]);
  return v;
}

void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m, const std::vector<std::string>& names) {
  auto out = csv::open_output(path);
  out << "feature";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << names.at(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << csv::format_number(m(i, j));
    out << '\n';
  }
}

}  // namespace solartwin
