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

#ifndef PFTS_TYPES_H_
#define PFTS_TYPES_H_

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace pfts {

using Point = Eigen::VectorXd;

// z = (x, x'): an ordered pair of actions.
struct PointPair {
  Point first;
  Point second;
};

// Fixed, nonempty, ordered grid of actions. Every point lies inside bounds.
class CandidateSet {
 public:
  CandidateSet() = default;
  // Bounds are inferred as the per-dimension min/max of the points.
  explicit CandidateSet(std::vector<Point> points);
  CandidateSet(std::vector<Point> points,
               std::vector<std::pair<double, double>> bounds);

  // Evenly spaced tensor grid with `per_dim` points in each dimension.
  static CandidateSet Grid(int dim, int per_dim, double lo, double hi);

  size_t size() const { return points_.size(); }
  Eigen::Index dim() const { return points_.empty() ? 0 : points_[0].size(); }
  const Point& operator[](size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<std::pair<double, double>>& bounds() const {
    return bounds_;
  }

 private:
  void Validate() const;

  std::vector<Point> points_;
  std::vector<std::pair<double, double>> bounds_;
};

// Lowest index attaining the maximum. Requires a nonempty vector.
Eigen::Index ArgmaxLowest(const Eigen::VectorXd& values);

}  // namespace pfts

#endif  // PFTS_TYPES_H_
