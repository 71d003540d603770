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

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "solartwin/error.hpp"

namespace solartwin {

template <typename Scalar>
using GpMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using GpVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Squared-exponential kernel with per-dimension length scales:
//   k(a, b) = sf2 * exp(-0.5 * sum_d ((a_d - b_d) / l_d)^2)
template <typename Scalar>
struct RbfKernel {
  Scalar signal_variance = Scalar(1);
  GpVector<Scalar> length_scales;
  Scalar noise_variance = Scalar(0);

  template <typename DerivedA, typename DerivedB>
  Scalar operator()(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) const {
    const Scalar r2 = ((a.derived().transpose() - b.derived().transpose()).cwiseQuotient(length_scales)).squaredNorm();
    return signal_variance * std::exp(Scalar(-0.5) * r2);
  }

  void validate(Eigen::Index dims) const {
    if (!(signal_variance > Scalar(0))) throw DomainError("gp: signal variance must be > 0");
    if (!(noise_variance >= Scalar(0))) throw DomainError("gp: noise variance must be >= 0");
    if (length_scales.size() != dims) throw DomainError("gp: one length scale per input dimension expected");
    if (!(length_scales.array() > Scalar(0)).all()) throw DomainError("gp: length scales must be > 0");
  }
};

// Posterior of a constant-mean GP; rows of `points` are observation inputs.
template <typename Scalar>
struct GpModel {
  GpMatrix<Scalar> points;
  GpVector<Scalar> values;
  RbfKernel<Scalar> kernel;
  Scalar prior_mean = Scalar(0);
  Scalar jitter = Scalar(0);  // diagonal added beyond noise_variance to reach PD
  Eigen::LLT<GpMatrix<Scalar>> cholesky;
  GpVector<Scalar> alpha;  // (K + s2 I)^-1 (values - prior_mean)
};

template <typename Scalar>
struct GpPrediction {
  Scalar mean = Scalar(0);
  Scalar sigma = Scalar(0);
};

template <typename Scalar>
GpMatrix<Scalar> gp_kernel_matrix(const RbfKernel<Scalar>& k, const GpMatrix<Scalar>& a, const GpMatrix<Scalar>& b) {
  GpMatrix<Scalar> out(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) out(i, j) = k(a.row(i), b.row(j));
  return out;
}

// Factorizes K + noise I. If that is not numerically positive definite, a
// growing diagonal jitter (1e-10 .. 1e-2 of the signal variance) is tried
// before giving up with NumericalError. prior_mean defaults to the sample mean.
template <typename Scalar>
GpModel<Scalar> gp_fit(const GpMatrix<Scalar>& points, const GpVector<Scalar>& values, const RbfKernel<Scalar>& kernel,
                       std::optional<Scalar> prior_mean = std::nullopt) {
  if (points.rows() < 1) throw DomainError("gp_fit: need at least one observation");
  if (points.rows() != values.size()) throw DomainError("gp_fit: points and values differ in length");
  kernel.validate(points.cols());

  GpModel<Scalar> gp;
  gp.points = points;
  gp.values = values;
  gp.kernel = kernel;
  gp.prior_mean = prior_mean.value_or(values.mean());

  const GpMatrix<Scalar> k = gp_kernel_matrix(kernel, points, points);
  const auto n = points.rows();
  const Scalar floor = Scalar(1e-12) * kernel.signal_variance;
  Scalar jitter(0);
  for (int attempt = 0; attempt <= 9; ++attempt) {
    GpMatrix<Scalar> a = k;
    a.diagonal().array() += kernel.noise_variance + jitter;
    gp.cholesky.compute(a);
    const bool ok = gp.cholesky.info() == Eigen::Success &&
                    gp.cholesky.matrixLLT().diagonal().array().square().minCoeff() > floor;
    if (ok) {
      gp.jitter = jitter;
      gp.alpha = gp.cholesky.solve(values - GpVector<Scalar>::Constant(n, gp.prior_mean));
      return gp;
    }
    jitter = attempt == 0 ? Scalar(1e-10) * kernel.signal_variance : jitter * Scalar(10);
  }
  throw NumericalError("gp_fit: kernel matrix not positive definite after maximum jitter");
}

template <typename Scalar, typename Derived>
GpPrediction<Scalar> gp_predict(const GpModel<Scalar>& gp, const Eigen::MatrixBase<Derived>& x) {
  GpVector<Scalar> ks(gp.points.rows());
  for (Eigen::Index i = 0; i < gp.points.rows(); ++i) ks(i) = gp.kernel(gp.points.row(i), x);
  const Scalar mean = gp.prior_mean + ks.dot(gp.alpha);
  const GpVector<Scalar> v = gp.cholesky.matrixL().solve(ks);
  const Scalar var = gp.kernel.signal_variance - v.squaredNorm();
  return {mean, std::sqrt(std::max(Scalar(0), var))};
}

// Batched posterior over the rows of `xs`.
template <typename Scalar>
void gp_predict(const GpModel<Scalar>& gp, const GpMatrix<Scalar>& xs, GpVector<Scalar>& mean, GpVector<Scalar>& sigma) {
  const GpMatrix<Scalar> ks = gp_kernel_matrix(gp.kernel, gp.points, xs);  // n x m
  mean = (ks.transpose() * gp.alpha).array() + gp.prior_mean;
  const GpMatrix<Scalar> v = gp.cholesky.matrixL().solve(ks);
  sigma = (gp.kernel.signal_variance - v.colwise().squaredNorm().transpose().array()).max(Scalar(0)).sqrt();
}

// EI for minimization:
//   (f_min - mu) Phi(z) + sigma phi(z),  z = (f_min - mu) / sigma;
// max(f_min - mu, 0) when sigma == 0.
template <typename Scalar>
Scalar expected_improvement(Scalar mu, Scalar sigma, Scalar f_min) {
  if (sigma < Scalar(0)) throw DomainError("expected_improvement: sigma must be >= 0");
  const Scalar improvement = f_min - mu;
  if (sigma == Scalar(0)) return std::max(improvement, Scalar(0));
  const Scalar z = improvement / sigma;
  const Scalar cdf = Scalar(0.5) * std::erfc(-z / std::sqrt(Scalar(2)));
  const Scalar pdf = std::exp(Scalar(-0.5) * z * z) / std::sqrt(Scalar(2) * Scalar(3.14159265358979323846264338327950288L));
  return std::max(Scalar(0), improvement * cdf + sigma * pdf);
}

}  // namespace solartwin
