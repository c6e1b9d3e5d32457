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

#ifndef PFTS_POLICIES_H_
#define PFTS_POLICIES_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "pfts/pref_inference.h"
#include "pfts/rng.h"
#include "pfts/scalar_gp.h"
#include "pfts/types.h"

namespace pfts {

// Indices into a CandidateSet plus per-policy diagnostics.
struct PairDecision {
  size_t first = 0;
  size_t second = 0;
  std::map<std::string, double> diagnostics;
};

// Schedules for the Thompson-sampling exploration scale v_t.
enum class ExplorationKind {
  kPractical,  // v_t^2 = sqrt(t + 1 + log(2 / 0.05))
  kTheory,     // v_t = beta_t(delta)
  kConstant,
};

struct ExplorationSchedule {
  ExplorationKind kind = ExplorationKind::kPractical;
  double delta = 0.05;   // kTheory
  double constant = 1.0;  // kConstant
};

// v_t for 1-based round t. The posterior is consulted only by kTheory (and
// may be null for the other schedules).
double ExplorationScale(const ExplorationSchedule& schedule, int round,
                        const PrefPosterior* posterior);

// Two independent posterior draws against anchor x0 = candidates[0];
// x_t and x'_t are their argmaxes (lowest index on ties).
PairDecision PftsSelect(const PrefPosterior& posterior,
                        const CandidateSet& candidates, double scale,
                        Rng& rng);

// Joint draw from the scalar posterior with covariance scale^2 k_t; argmax.
size_t GptsSelect(const ScalarPosterior& posterior,
                  const CandidateSet& candidates, double scale, Rng& rng);

// argmax_x min_{x'} mean(x, x') - beta sd(x, x') over a full pair table;
// x' is the inner minimizer over x' != x (the diagonal only for n = 1).
PairDecision MaxMinLcbChoose(const Eigen::MatrixXd& mean,
                             const Eigen::MatrixXd& sd, double beta);
PairDecision MaxMinLcbSelect(const PrefPosterior& posterior,
                             const CandidateSet& candidates, double beta);

// x'_t = carried arm (candidates[0] on round 1);
// x_t = argmax_x mean(x, x'_t) + beta sd(x, x'_t).
PairDecision PopBoChoose(const Eigen::VectorXd& mean_vs_anchor,
                         const Eigen::VectorXd& sd_vs_anchor,
                         size_t anchor_index, double beta);
PairDecision PopBoSelect(const PrefPosterior& posterior,
                         const CandidateSet& candidates,
                         std::optional<size_t> previous_first, double beta);

// argmax_x h_t(x, x0) + beta sigma_t(x, x0).
size_t DuelUcbSelect(const PrefPosterior& posterior,
                     const CandidateSet& candidates, const Point& anchor,
                     double beta);

// Uniform, independent pair.
PairDecision RandomSelect(const CandidateSet& candidates, Rng& rng);

}  // namespace pfts

#endif  // PFTS_POLICIES_H_
