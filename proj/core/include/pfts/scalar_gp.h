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

#ifndef PFTS_SCALAR_GP_H_
#define PFTS_SCALAR_GP_H_

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pfts/kernels.h"
#include "pfts/numeric.h"
#include "pfts/types.h"

namespace pfts {

// Kernel ridge regression on scalar observations:
//   mean(x) = k_t(x)^T (K_t + lambda I)^{-1} o_t
//   var(x)  = k(x, x) - k_t(x)^T (K_t + lambda I)^{-1} k_t(x)
// Repeated points are pooled (count c_j, sum s_j), which turns the t x t
// system into an n x n one over the distinct points with R = diag(sqrt(c)):
//   (K_t + lambda I)^{-1} -> R (lambda I + R G R)^{-1} R^{-1}.
class ScalarPosterior {
 public:
  double lambda() const { return lambda_; }
  const BaseKernel& base() const { return base_; }
  size_t size() const { return observation_count_; }

  std::pair<double, double> MeanVar(const Point& x) const;

  // Joint mean and covariance over the candidates.
  void Moments(std::span<const Point> candidates, Eigen::VectorXd* mean,
               Eigen::MatrixXd* covariance) const;

 private:
  friend ScalarPosterior FitScalarPosterior(std::span<const Point>,
                                            std::span<const double>,
                                            const BaseKernel&, double);

  BaseKernel base_;
  double lambda_ = 1.0;
  size_t observation_count_ = 0;
  std::vector<Point> basis_;
  Eigen::VectorXd sqrt_counts_;
  PsdFactor factor_;           // of lambda I + R G R
  Eigen::VectorXd mean_weights_;  // R (lambda I + R G R)^{-1} R^{-1} s
};

// Throws kInvalidArgument (lambda <= 0), kDimensionMismatch (lengths differ),
// kNotPsd.
ScalarPosterior FitScalarPosterior(std::span<const Point> points,
                                   std::span<const double> observations,
                                   const BaseKernel& base, double lambda);

}  // namespace pfts

#endif  // PFTS_SCALAR_GP_H_
