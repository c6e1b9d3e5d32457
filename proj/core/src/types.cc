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

#include "pfts/types.h"

#include <algorithm>
#include <string>

#include "pfts/error.h"

namespace pfts {

CandidateSet::CandidateSet(std::vector<Point> points)
    : points_(std::move(points)) {
  if (points_.empty()) {
    throw Error(ErrorCode::kEmptyData, "candidate set must be nonempty");
  }
  const Eigen::Index d = points_[0].size();
  bounds_.assign(d, {0.0, 0.0});
  for (Eigen::Index k = 0; k < d; ++k) {
    bounds_[k] = {points_[0][k], points_[0][k]};
  }
  for (const Point& p : points_) {
    if (p.size() != d) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "candidate points have unequal dimensions");
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      bounds_[k].first = std::min(bounds_[k].first, p[k]);
      bounds_[k].second = std::max(bounds_[k].second, p[k]);
    }
  }
}

CandidateSet::CandidateSet(std::vector<Point> points,
                           std::vector<std::pair<double, double>> bounds)
    : points_(std::move(points)), bounds_(std::move(bounds)) {
  Validate();
}

void CandidateSet::Validate() const {
  if (points_.empty()) {
    throw Error(ErrorCode::kEmptyData, "candidate set must be nonempty");
  }
  const Eigen::Index d = points_[0].size();
  if (static_cast<Eigen::Index>(bounds_.size()) != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "bounds dimension does not match candidate dimension");
  }
  for (size_t i = 0; i < points_.size(); ++i) {
    const Point& p = points_[i];
    if (p.size() != d) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "candidate points have unequal dimensions");
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      if (p[k] < bounds_[k].first || p[k] > bounds_[k].second) {
        throw Error(ErrorCode::kInvalidArgument,
                    "candidate " + std::to_string(i) + " lies outside bounds");
      }
    }
  }
}

CandidateSet CandidateSet::Grid(int dim, int per_dim, double lo, double hi) {
  if (dim < 1 || per_dim < 1 || !(lo <= hi)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid grid specification");
  }
  std::vector<double> axis(per_dim);
  for (int i = 0; i < per_dim; ++i) {
    axis[i] = per_dim == 1 ? lo : lo + (hi - lo) * i / (per_dim - 1.0);
  }
  size_t total = 1;
  for (int k = 0; k < dim; ++k) total *= per_dim;
  std::vector<Point> points;
  points.reserve(total);
  for (size_t flat = 0; flat < total; ++flat) {
    Point p(dim);
    size_t rest = flat;
    // Last coordinate varies fastest.
    for (int k = dim - 1; k >= 0; --k) {
      p[k] = axis[rest % per_dim];
      rest /= per_dim;
    }
    points.push_back(std::move(p));
  }
  return CandidateSet(std::move(points),
                      std::vector<std::pair<double, double>>(dim, {lo, hi}));
}

Eigen::Index ArgmaxLowest(const Eigen::VectorXd& values) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace pfts
