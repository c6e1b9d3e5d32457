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

#include "pfts/environments.h"

#include <cmath>
#include <fstream>
#include <numbers>

#include "pfts/csv.h"
#include "pfts/error.h"
#include "pfts/pref_inference.h"

namespace pfts {

double AckleyFlipped(const Point& x) {
  constexpr double a = 20.0;
  constexpr double b = 0.2;
  constexpr double c = 2.0 * std::numbers::pi;
  const double d = static_cast<double>(x.size());
  if (d == 0) return 0.0;
  const double mean_square = x.squaredNorm() / d;
  const double mean_cos = x.unaryExpr([](double v) { return std::cos(c * v); })
                              .sum() / d;
  const double ackley = -a * std::exp(-b * std::sqrt(mean_square)) -
                        std::exp(mean_cos) + a + std::numbers::e;
  return -ackley;
}

namespace {

size_t GridArgmax(const Eigen::VectorXd& values) {
  return static_cast<size_t>(ArgmaxLowest(values));
}

}  // namespace

Utility Utility::Ackley(const CandidateSet& grid) {
  Utility u;
  u.kind_ = UtilityKind::kAckleyFlipped;
  u.values_.resize(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) u.values_[i] = AckleyFlipped(grid[i]);
  u.best_index_ = GridArgmax(u.values_);
  return u;
}

Utility Utility::Rkhs(RkhsSample sample, const CandidateSet& grid) {
  Utility u;
  u.kind_ = UtilityKind::kRkhsSample;
  u.values_.resize(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) u.values_[i] = sample(grid[i]);
  u.rkhs_ = std::move(sample);
  u.best_index_ = GridArgmax(u.values_);
  return u;
}

Utility Utility::Tabular(const CandidateSet& grid, Eigen::VectorXd values) {
  if (values.size() != static_cast<Eigen::Index>(grid.size())) {
    throw Error(ErrorCode::kDimensionMismatch,
                "utility values do not match the candidate count");
  }
  Utility u;
  u.kind_ = UtilityKind::kTabular;
  u.values_ = std::move(values);
  u.points_ = grid.points();
  u.best_index_ = GridArgmax(u.values_);
  return u;
}

double Utility::Evaluate(const Point& x) const {
  switch (kind_) {
    case UtilityKind::kAckleyFlipped:
      return AckleyFlipped(x);
    case UtilityKind::kRkhsSample:
      return (*rkhs_)(x);
    case UtilityKind::kTabular:
      for (size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].size() == x.size() && points_[i] == x) return values_[i];
      }
      throw Error(ErrorCode::kInvalidArgument,
                  "tabular utility is undefined at this point");
  }
  return 0.0;
}

Environment MakeAckleyEnvironment(int dim, int points_per_dim, double lo,
                                  double hi) {
  CandidateSet grid = CandidateSet::Grid(dim, points_per_dim, lo, hi);
  Utility utility = Utility::Ackley(grid);
  return {"ackley", std::move(grid), std::move(utility)};
}

Environment MakeRkhsEnvironment(const BaseKernel& kernel, int grid_points,
                                double lo, double hi, double norm_bound,
                                uint64_t utility_seed) {
  CandidateSet grid = CandidateSet::Grid(1, grid_points, lo, hi);
  Rng rng(utility_seed);
  RkhsSample sample = DrawRkhsSample(kernel, grid, norm_bound, rng);
  Utility utility = Utility::Rkhs(std::move(sample), grid);
  return {"rkhs", std::move(grid), std::move(utility)};
}

TabularData LoadTabular(std::istream& in,
                        const std::vector<std::string>& feature_columns,
                        const std::string& utility_column,
                        const std::optional<RescaleSpec>& rescale) {
  const CsvTable table = ReadCsv(in);
  if (feature_columns.empty()) {
    throw Error(ErrorCode::kParseError, "no feature columns selected");
  }
  std::vector<size_t> feature_index;
  for (const std::string& name : feature_columns) {
    feature_index.push_back(table.Column(name));
  }
  const size_t utility_index = table.Column(utility_column);
  if (table.rows.empty()) {
    throw Error(ErrorCode::kEmptyData, "table has no data rows");
  }

  std::vector<Point> points;
  Eigen::VectorXd values(table.rows.size());
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    // Data rows start on line 2.
    Point p(feature_index.size());
    for (size_t k = 0; k < feature_index.size(); ++k) {
      p[k] = ParseNumber(row[feature_index[k]], r + 2, feature_columns[k]);
    }
    points.push_back(std::move(p));
    values[r] = ParseNumber(row[utility_index], r + 2, utility_column);
  }

  if (rescale) {
    if (rescale->mode == RescaleSpec::Mode::kMinMax) {
      const double lo = values.minCoeff();
      const double hi = values.maxCoeff();
      if (hi > lo) {
        values = ((values.array() - lo) / (hi - lo) *
                      (rescale->hi - rescale->lo) +
                  rescale->lo)
                     .matrix();
      } else {
        values.setConstant(rescale->lo);
      }
    } else {
      if (!(rescale->divisor != 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "rescale divisor is zero");
      }
      values /= rescale->divisor;
    }
  }
  CandidateSet candidates(std::move(points));
  Utility utility = Utility::Tabular(candidates, std::move(values));
  return {std::move(candidates), std::move(utility)};
}

TabularData LoadTabular(const std::string& path,
                        const std::vector<std::string>& feature_columns,
                        const std::string& utility_column,
                        const std::optional<RescaleSpec>& rescale) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return LoadTabular(in, feature_columns, utility_column, rescale);
}

double PreferenceProbability(double f_first, double f_second) {
  return Logistic(f_first - f_second);
}

double BtlOracle::Probability(size_t first, size_t second) const {
  return PreferenceProbability(utility_->at(first), utility_->at(second));
}

int BtlOracle::Query(size_t first, size_t second) {
  return rng_.Bernoulli(Probability(first, second)) ? 1 : 0;
}

int BtlOracle::QueryPoints(const Point& first, const Point& second) {
  const double p = PreferenceProbability(utility_->Evaluate(first),
                                         utility_->Evaluate(second));
  return rng_.Bernoulli(p) ? 1 : 0;
}

double ScalarFeedback(const Utility& utility, size_t index, Rng& rng,
                      double noise_sd) {
  const double noise = rng.Normal();
  return utility.at(index) + noise_sd * noise;
}

double InstantaneousRegret(double f_star, double f_first, double f_second) {
  return 0.5 * (Logistic(f_star - f_first) + Logistic(f_star - f_second) - 1.0);
}

double InstantaneousRegret(const Utility& utility, size_t first,
                           size_t second) {
  return InstantaneousRegret(utility.best_value(), utility.at(first),
                             utility.at(second));
}

}  // namespace pfts
