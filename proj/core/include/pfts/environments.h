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

#ifndef PFTS_ENVIRONMENTS_H_
#define PFTS_ENVIRONMENTS_H_

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pfts/kernels.h"
#include "pfts/rng.h"
#include "pfts/types.h"

namespace pfts {

// -Ackley(x) with a = 20, b = 0.2, c = 2 pi. Maximum 0 at the origin.
double AckleyFlipped(const Point& x);

enum class UtilityKind { kAckleyFlipped, kRkhsSample, kTabular };

// Latent utility f with values cached on its candidate grid.
class Utility {
 public:
  static Utility Ackley(const CandidateSet& grid);
  static Utility Rkhs(RkhsSample sample, const CandidateSet& grid);
  // Defined only on the listed points.
  static Utility Tabular(const CandidateSet& grid, Eigen::VectorXd values);

  UtilityKind kind() const { return kind_; }
  const Eigen::VectorXd& grid_values() const { return values_; }
  double at(size_t index) const { return values_[index]; }
  // Off-grid evaluation; tabular utilities only accept listed points.
  double Evaluate(const Point& x) const;

  // x* is the grid argmax (lowest index on ties).
  size_t best_index() const { return best_index_; }
  double best_value() const { return values_[best_index_]; }

 private:
  UtilityKind kind_ = UtilityKind::kTabular;
  Eigen::VectorXd values_;
  size_t best_index_ = 0;
  std::optional<RkhsSample> rkhs_;
  std::vector<Point> points_;
};

struct Environment {
  std::string name;
  CandidateSet candidates;
  Utility utility;
};

Environment MakeAckleyEnvironment(int dim, int points_per_dim, double lo,
                                  double hi);
Environment MakeRkhsEnvironment(const BaseKernel& kernel, int grid_points,
                                double lo, double hi, double norm_bound,
                                uint64_t utility_seed);

// Affine rescaling of tabular utilities: min -> lo and max -> hi, or a plain
// division by `divisor`.
struct RescaleSpec {
  enum class Mode { kMinMax, kDivide };
  Mode mode = Mode::kMinMax;
  double lo = 0.0;
  double hi = 10.0;
  double divisor = 10.0;
};

struct TabularData {
  CandidateSet candidates;
  Utility utility;
};

// Throws kParseError naming a missing column, kNonNumeric naming the row and
// column, kEmptyData for a header-only file.
TabularData LoadTabular(std::istream& in,
                        const std::vector<std::string>& feature_columns,
                        const std::string& utility_column,
                        const std::optional<RescaleSpec>& rescale);
TabularData LoadTabular(const std::string& path,
                        const std::vector<std::string>& feature_columns,
                        const std::string& utility_column,
                        const std::optional<RescaleSpec>& rescale);

// Pr(x > x') = mu(f(x) - f(x')).
double PreferenceProbability(double f_first, double f_second);

// Bradley-Terry-Luce feedback from a utility; owns its generator.
class BtlOracle {
 public:
  BtlOracle(const Utility& utility, Rng rng)
      : utility_(&utility), rng_(std::move(rng)) {}

  double Probability(size_t first, size_t second) const;
  // y = 1 with probability mu(f(x) - f(x')).
  int Query(size_t first, size_t second);
  int QueryPoints(const Point& first, const Point& second);

 private:
  const Utility* utility_;
  Rng rng_;
};

// f(x) + noise_sd * eps, eps ~ N(0, 1).
double ScalarFeedback(const Utility& utility, size_t index, Rng& rng,
                      double noise_sd = 1.0);

// (mu(f* - f(x)) + mu(f* - f(x')) - 1) / 2.
double InstantaneousRegret(double f_star, double f_first, double f_second);
double InstantaneousRegret(const Utility& utility, size_t first,
                           size_t second);

}  // namespace pfts

#endif  // PFTS_ENVIRONMENTS_H_
