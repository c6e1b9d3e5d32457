// Copyright 2026 The PF-TS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pfts/numeric.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "pfts/error.h"

namespace pfts {
namespace {

bool TryCholesky(const Eigen::MatrixXd& m, Eigen::MatrixXd* lower) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return false;
  *lower = llt.matrixL();
  return lower->allFinite();
}

void CheckRhs(const PsdFactor& factor, Eigen::Index rows) {
  if (rows != factor.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "right-hand side has " + std::to_string(rows) +
                    " rows, factor has dimension " +
                    std::to_string(factor.dim()));
  }
}

}  // namespace

PsdFactor FactorPsd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "matrix must be square");
  }
  PsdFactor factor;
  if (m.rows() == 0) return factor;

  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorCode::kInvalidArgument, "matrix is not symmetric");
  }
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  if (TryCholesky(sym, &factor.lower)) return factor;

  const Eigen::MatrixXd eye =
      Eigen::MatrixXd::Identity(sym.rows(), sym.cols());
  for (double jitter = kMinJitter; jitter <= kMaxJitter * 1.0000001;
       jitter *= 10.0) {
    if (TryCholesky(sym + jitter * eye, &factor.lower)) {
      factor.jitter_used = jitter;
      return factor;
    }
  }
  throw Error(ErrorCode::kNotPsd,
              "matrix is not positive semidefinite (jitter up to 1e-4 "
              "failed)");
}

Eigen::MatrixXd SolvePsd(const PsdFactor& factor, const Eigen::MatrixXd& rhs) {
  CheckRhs(factor, rhs.rows());
  if (factor.dim() == 0) return rhs;
  const auto lower = factor.lower.triangularView<Eigen::Lower>();
  Eigen::MatrixXd half = lower.solve(rhs);
  return lower.transpose().solve(half);
}

Eigen::VectorXd SolvePsd(const PsdFactor& factor, const Eigen::VectorXd& rhs) {
  Eigen::MatrixXd as_matrix = rhs;
  return SolvePsd(factor, as_matrix).col(0);
}

Eigen::MatrixXd HalfSolvePsd(const PsdFactor& factor,
                             const Eigen::MatrixXd& rhs) {
  CheckRhs(factor, rhs.rows());
  if (factor.dim() == 0) return rhs;
  return factor.lower.triangularView<Eigen::Lower>().solve(rhs);
}

double LogDetPsd(const PsdFactor& factor) {
  return 2.0 * factor.lower.diagonal().array().log().sum();
}

Eigen::MatrixXd CovarianceRoot(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "covariance must be square");
  }
  const Eigen::Index n = cov.rows();
  Eigen::MatrixXd root = Eigen::MatrixXd::Zero(n, n);

  // A PSD matrix with a zero diagonal entry has a zero row and column; keep
  // those coordinates deterministic.
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (cov(i, i) != 0.0) active.push_back(i);
  }
  if (active.empty()) return root;

  const Eigen::Index m = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      sub(a, b) = 0.5 * (cov(active[a], active[b]) + cov(active[b], active[a]));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sub);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPsd, "eigendecomposition failed");
  }
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double floor =
      -kEigenClampTolerance * std::max(1.0, values.cwiseAbs().maxCoeff());
  if (values.minCoeff() < floor) {
    throw Error(ErrorCode::kNotPsd,
                "covariance has eigenvalue " + std::to_string(values.minCoeff()));
  }
  const Eigen::VectorXd scales = values.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd sub_root = eig.eigenvectors() * scales.asDiagonal();
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      root(active[a], active[b]) = sub_root(a, b);
    }
  }
  return root;
}

Eigen::VectorXd SampleWithRoot(const Eigen::VectorXd& mean,
                               const Eigen::MatrixXd& root, Rng& rng) {
  if (root.rows() != mean.size() || root.cols() != mean.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mean and covariance root sizes differ");
  }
  Eigen::VectorXd eps(mean.size());
  for (Eigen::Index i = 0; i < eps.size(); ++i) eps[i] = rng.Normal();
  return mean + root * eps;
}

Eigen::VectorXd SampleMvn(const Eigen::VectorXd& mean,
                          const Eigen::MatrixXd& cov, Rng& rng) {
  if (cov.rows() != mean.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mean and covariance sizes differ");
  }
  return SampleWithRoot(mean, CovarianceRoot(cov), rng);
}

}  // namespace pfts
