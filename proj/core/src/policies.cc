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

#include "pfts/policies.h"

#include <algorithm>
#include <cmath>

#include "pfts/error.h"
#include "pfts/numeric.h"

namespace pfts {

double ExplorationScale(const ExplorationSchedule& schedule, int round,
                        const PrefPosterior* posterior) {
  switch (schedule.kind) {
    case ExplorationKind::kPractical:
      return std::sqrt(std::sqrt(round + 1.0 + std::log(2.0 / 0.05)));
    case ExplorationKind::kTheory:
      if (posterior == nullptr) {
        throw Error(ErrorCode::kInvalidArgument,
                    "theory schedule needs a fitted posterior");
      }
      return posterior->Beta(schedule.delta);
    case ExplorationKind::kConstant:
      return schedule.constant;
  }
  return 1.0;
}

PairDecision PftsSelect(const PrefPosterior& posterior,
                        const CandidateSet& candidates, double scale,
                        Rng& rng) {
  if (candidates.size() == 0) {
    throw Error(ErrorCode::kEmptyData, "candidate set must be nonempty");
  }
  if (!(scale >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "exploration scale must be >= 0");
  }
  // Both draws share one factorization.
  AnchoredMoments moments =
      posterior.Anchored(candidates.points(), candidates[0]);
  moments.covariance *= scale * scale;
  const Eigen::MatrixXd root = CovarianceRoot(moments.covariance);
  const Eigen::VectorXd first = SampleWithRoot(moments.mean, root, rng);
  const Eigen::VectorXd second = SampleWithRoot(moments.mean, root, rng);

  PairDecision decision;
  decision.first = static_cast<size_t>(ArgmaxLowest(first));
  decision.second = static_cast<size_t>(ArgmaxLowest(second));
  decision.diagnostics["anchor"] = 0.0;
  decision.diagnostics["v_t"] = scale;
  decision.diagnostics["sample_first"] = first[decision.first];
  decision.diagnostics["sample_second"] = second[decision.second];
  return decision;
}

size_t GptsSelect(const ScalarPosterior& posterior,
                  const CandidateSet& candidates, double scale, Rng& rng) {
  if (candidates.size() == 0) {
    throw Error(ErrorCode::kEmptyData, "candidate set must be nonempty");
  }
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  posterior.Moments(candidates.points(), &mean, &cov);
  cov *= scale * scale;
  return static_cast<size_t>(ArgmaxLowest(SampleMvn(mean, cov, rng)));
}

PairDecision MaxMinLcbChoose(const Eigen::MatrixXd& mean,
                             const Eigen::MatrixXd& sd, double beta) {
  const Eigen::Index n = mean.rows();
  if (n == 0 || mean.cols() != n || sd.rows() != n || sd.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "pair tables must be square");
  }
  PairDecision decision;
  double best_value = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index inner = -1;
    double inner_value = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i && n > 1) continue;
      const double value = mean(i, j) - beta * sd(i, j);
      if (inner < 0 || value < inner_value) {
        inner_value = value;
        inner = j;
      }
    }
    if (i == 0 || inner_value > best_value) {
      best_value = inner_value;
      decision.first = static_cast<size_t>(i);
      decision.second = static_cast<size_t>(inner);
    }
  }
  decision.diagnostics["beta"] = beta;
  decision.diagnostics["lcb"] = best_value;
  return decision;
}

PairDecision MaxMinLcbSelect(const PrefPosterior& posterior,
                             const CandidateSet& candidates, double beta) {
  const Eigen::Index n = static_cast<Eigen::Index>(candidates.size());
  // Pair moments from the anchored block: h_t is a difference of utilities
  // and k_t^D keeps the four-term dueling form, so
  //   h(i, j) = m_i - m_j,  var(i, j) = C_ii + C_jj - 2 C_ij.
  const AnchoredMoments moments =
      posterior.Anchored(candidates.points(), candidates[0]);
  Eigen::MatrixXd mean(n, n);
  Eigen::MatrixXd sd(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      mean(i, j) = moments.mean[i] - moments.mean[j];
      const double var = moments.covariance(i, i) + moments.covariance(j, j) -
                         2.0 * moments.covariance(i, j);
      sd(i, j) = std::sqrt(std::max(0.0, var));
    }
  }
  return MaxMinLcbChoose(mean, sd, beta);
}

PairDecision PopBoChoose(const Eigen::VectorXd& mean_vs_anchor,
                         const Eigen::VectorXd& sd_vs_anchor,
                         size_t anchor_index, double beta) {
  if (mean_vs_anchor.size() == 0 ||
      mean_vs_anchor.size() != sd_vs_anchor.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "score vectors differ in size");
  }
  const Eigen::VectorXd ucb = mean_vs_anchor + beta * sd_vs_anchor;
  PairDecision decision;
  decision.first = static_cast<size_t>(ArgmaxLowest(ucb));
  decision.second = anchor_index;
  decision.diagnostics["beta"] = beta;
  decision.diagnostics["ucb"] = ucb[decision.first];
  return decision;
}

PairDecision PopBoSelect(const PrefPosterior& posterior,
                         const CandidateSet& candidates,
                         std::optional<size_t> previous_first, double beta) {
  const size_t anchor = previous_first.value_or(0);
  if (anchor >= candidates.size()) {
    throw Error(ErrorCode::kInvalidArgument, "carried arm out of range");
  }
  const AnchoredMoments moments =
      posterior.Anchored(candidates.points(), candidates[anchor]);
  const Eigen::VectorXd sd =
      moments.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  return PopBoChoose(moments.mean, sd, anchor, beta);
}

size_t DuelUcbSelect(const PrefPosterior& posterior,
                     const CandidateSet& candidates, const Point& anchor,
                     double beta) {
  const AnchoredMoments moments =
      posterior.Anchored(candidates.points(), anchor);
  const Eigen::VectorXd sd =
      moments.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  return static_cast<size_t>(ArgmaxLowest(moments.mean + beta * sd));
}

PairDecision RandomSelect(const CandidateSet& candidates, Rng& rng) {
  if (candidates.size() == 0) {
    throw Error(ErrorCode::kEmptyData, "candidate set must be nonempty");
  }
  PairDecision decision;
  decision.first = rng.UniformIndex(candidates.size());
  decision.second = rng.UniformIndex(candidates.size());
  return decision;
}

}  // namespace pfts
