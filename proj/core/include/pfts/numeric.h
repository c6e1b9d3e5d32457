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

#ifndef PFTS_NUMERIC_H_
#define PFTS_NUMERIC_H_

#include <Eigen/Core>

#include "pfts/rng.h"

namespace pfts {

// Lower Cholesky factor L with L * L^T = M + jitter * I.
struct PsdFactor {
  Eigen::MatrixXd lower;
  double jitter_used = 0.0;

  Eigen::Index dim() const { return lower.rows(); }
};

// Jitter ladder tried after a failed plain factorization: 1e-12 up to 1e-4,
// multiplying by 10 each step.
inline constexpr double kMinJitter = 1e-12;
inline constexpr double kMaxJitter = 1e-4;

// Eigenvalues of a covariance down to this (relative) level are clamped to
// zero before sampling; anything more negative is rejected as NotPsd.
inline constexpr double kEigenClampTolerance = 1e-8;

// Symmetrizes m by averaging with its transpose, then factors it. Throws
// kInvalidArgument if m is not square or asymmetric beyond 1e-10 (relative),
// kNotPsd if the largest jitter still fails.
PsdFactor FactorPsd(const Eigen::MatrixXd& m);

// Solves (M + jitter I) X = rhs. Throws kDimensionMismatch.
Eigen::MatrixXd SolvePsd(const PsdFactor& factor, const Eigen::MatrixXd& rhs);
Eigen::VectorXd SolvePsd(const PsdFactor& factor, const Eigen::VectorXd& rhs);

// L^{-1} rhs, the half solve used for quadratic forms.
Eigen::MatrixXd HalfSolvePsd(const PsdFactor& factor,
                             const Eigen::MatrixXd& rhs);

// log det(M + jitter I).
double LogDetPsd(const PsdFactor& factor);

// Square root S of a covariance (S S^T = cov after clamping small negative
// eigenvalues). Coordinates with exactly zero variance get an all-zero row,
// so sampled values there equal the mean exactly.
Eigen::MatrixXd CovarianceRoot(const Eigen::MatrixXd& cov);

// mean + S * eps with eps i.i.d. standard normal drawn from rng in coordinate
// order.
Eigen::VectorXd SampleWithRoot(const Eigen::VectorXd& mean,
                               const Eigen::MatrixXd& root, Rng& rng);

Eigen::VectorXd SampleMvn(const Eigen::VectorXd& mean,
                          const Eigen::MatrixXd& cov, Rng& rng);

}  // namespace pfts

#endif  // PFTS_NUMERIC_H_
