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

#include "pfts/scalar_gp.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "pfts/error.h"

namespace pfts {

ScalarPosterior FitScalarPosterior(std::span<const Point> points,
                                   std::span<const double> observations,
                                   const BaseKernel& base, double lambda) {
  if (!(lambda > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
  }
  if (points.size() != observations.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "points and observations differ in length");
  }
  base.Validate();
  ScalarPosterior post;
  post.base_ = base;
  post.lambda_ = lambda;
  post.observation_count_ = points.size();

  std::map<std::vector<double>, size_t> index;
  std::vector<double> counts;
  std::vector<double> sums;
  for (size_t i = 0; i < points.size(); ++i) {
    std::vector<double> key(points[i].data(),
                            points[i].data() + points[i].size());
    auto [it, inserted] = index.emplace(std::move(key), post.basis_.size());
    if (inserted) {
      post.basis_.push_back(points[i]);
      counts.push_back(0.0);
      sums.push_back(0.0);
    }
    counts[it->second] += 1.0;
    sums[it->second] += observations[i];
  }
  const Eigen::Index n = static_cast<Eigen::Index>(post.basis_.size());
  if (n == 0) return post;

  post.sqrt_counts_.resize(n);
  Eigen::VectorXd scaled_sums(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    post.sqrt_counts_[j] = std::sqrt(counts[j]);
    scaled_sums[j] = sums[j] / post.sqrt_counts_[j];
  }
  Eigen::MatrixXd system = post.sqrt_counts_.asDiagonal() *
                           Gram(base, post.basis_) *
                           post.sqrt_counts_.asDiagonal();
  system.diagonal().array() += lambda;
  post.factor_ = FactorPsd(system);
  post.mean_weights_ =
      post.sqrt_counts_.asDiagonal() * SolvePsd(post.factor_, scaled_sums);
  return post;
}

std::pair<double, double> ScalarPosterior::MeanVar(const Point& x) const {
  const double prior = EvalBase(base_, x, x);
  if (basis_.empty()) return {0.0, prior};
  Eigen::VectorXd kx(basis_.size());
  for (size_t j = 0; j < basis_.size(); ++j) {
    kx[j] = EvalBase(base_, basis_[j], x);
  }
  const Eigen::VectorXd half =
      HalfSolvePsd(factor_, sqrt_counts_.asDiagonal() * kx).col(0);
  return {kx.dot(mean_weights_), std::max(0.0, prior - half.squaredNorm())};
}

void ScalarPosterior::Moments(std::span<const Point> candidates,
                              Eigen::VectorXd* mean,
                              Eigen::MatrixXd* covariance) const {
  *covariance = Gram(base_, candidates);
  if (basis_.empty()) {
    *mean = Eigen::VectorXd::Zero(candidates.size());
    return;
  }
  const Eigen::MatrixXd cross = CrossGram(base_, basis_, candidates);
  *mean = cross.transpose() * mean_weights_;
  const Eigen::MatrixXd half =
      HalfSolvePsd(factor_, sqrt_counts_.asDiagonal() * cross);
  covariance->noalias() -= half.transpose() * half;
}

}  // namespace pfts
