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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "pfts/error.h"

namespace pfts {
namespace {

const DuelingKernel kDueling{BaseKernel{KernelFamily::kMatern, 0.1}};

PreferenceHistory RandomHistory(const CandidateSet& grid, int rounds,
                                uint64_t seed) {
  PreferenceHistory h;
  Rng rng(seed);
  for (int i = 0; i < rounds; ++i) {
    const size_t a = rng.UniformIndex(grid.size());
    const size_t b = rng.UniformIndex(grid.size());
    const int label = grid[a][0] < grid[b][0] ? 1 : 0;
    h.Append(grid[a], grid[b], rng.Bernoulli(0.8) ? label : 1 - label);
  }
  return h;
}

TEST(ScheduleTest, PracticalTheoryConstant) {
  const PrefPosterior post = FitPreferencePosterior({}, kDueling, 0.05, 1.0);
  for (int t : {1, 10, 300}) {
    EXPECT_NEAR(ExplorationScale({}, t, nullptr),
                std::pow(t + 1.0 + std::log(40.0), 0.25), 1e-12);
  }
  ExplorationSchedule theory{ExplorationKind::kTheory, 0.1};
  EXPECT_EQ(ExplorationScale(theory, 1, &post), post.Beta(0.1));
  EXPECT_THROW(ExplorationScale(theory, 1, nullptr), Error);
  ExplorationSchedule constant{ExplorationKind::kConstant, 0.05, 2.5};
  EXPECT_EQ(ExplorationScale(constant, 7, nullptr), 2.5);
}

TEST(PftsSelectTest, ZeroScaleIsGreedy) {
  const CandidateSet grid = CandidateSet::Grid(1, 15, 0.0, 1.0);
  const PrefPosterior post = FitPreferencePosterior(
      RandomHistory(grid, 40, 1), kDueling, 0.05, 1.0);
  Eigen::VectorXd mean(15);
  for (size_t i = 0; i < 15; ++i) mean[i] = post.Mean({grid[i], grid[0]});
  Rng rng(3);
  const PairDecision d = PftsSelect(post, grid, 0.0, rng);
  EXPECT_EQ(d.first, static_cast<size_t>(ArgmaxLowest(mean)));
  EXPECT_EQ(d.second, d.first);
}

TEST(PftsSelectTest, PriorArgmaxIsNearUniform) {
  // Spacing far beyond the lengthscale makes the prior values independent.
  const CandidateSet grid = CandidateSet::Grid(1, 5, 0.0, 4.0);
  const PrefPosterior post = FitPreferencePosterior({}, kDueling, 0.05, 1.0);
  Rng rng(17);
  std::vector<int> first(5, 0), second(5, 0);
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    const PairDecision d = PftsSelect(post, grid, 1.0, rng);
    ++first[d.first];
    ++second[d.second];
  }
  for (int j = 0; j < 5; ++j) {
    EXPECT_NEAR(first[j] / double(trials), 0.2, 0.05) << j;
    EXPECT_NEAR(second[j] / double(trials), 0.2, 0.05) << j;
  }
}

TEST(PftsSelectTest, DeterministicPerSeed) {
  const CandidateSet grid = CandidateSet::Grid(1, 20, 0.0, 1.0);
  const PrefPosterior post = FitPreferencePosterior(
      RandomHistory(grid, 25, 2), kDueling, 0.05, 1.0);
  for (uint64_t seed = 1; seed < 20; ++seed) {
    Rng a(seed), b(seed);
    const PairDecision da = PftsSelect(post, grid, 1.5, a);
    const PairDecision db = PftsSelect(post, grid, 1.5, b);
    EXPECT_EQ(da.first, db.first);
    EXPECT_EQ(da.second, db.second);
    EXPECT_EQ(da.diagnostics, db.diagnostics);
    EXPECT_LT(da.first, 20u);
    EXPECT_LT(da.second, 20u);
  }
}

TEST(GptsSelectTest, ZeroScaleAndPriorUniformity) {
  const BaseKernel base{KernelFamily::kMatern, 0.1};
  const CandidateSet grid = CandidateSet::Grid(1, 5, 0.0, 4.0);
  const std::vector<Point> x = {grid[1], grid[3], grid[3]};
  const std::vector<double> o = {0.2, 1.5, 1.1};
  const ScalarPosterior fitted = FitScalarPosterior(x, o, base, 1.0);
  Rng rng(1);
  EXPECT_EQ(GptsSelect(fitted, grid, 0.0, rng), 3u);

  const ScalarPosterior prior = FitScalarPosterior({}, {}, base, 1.0);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 1000; ++i) ++counts[GptsSelect(prior, grid, 1.0, rng)];
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(counts[j] / 1000.0, 0.2, 0.05);

  Rng a(9), b(9);
  EXPECT_EQ(GptsSelect(fitted, grid, 1.0, a), GptsSelect(fitted, grid, 1.0, b));
}

// Brute force over off-diagonal pairs.
std::pair<size_t, size_t> MaxMinOracle(const Eigen::MatrixXd& mean,
                                       const Eigen::MatrixXd& sd,
                                       double beta) {
  const int n = static_cast<int>(mean.rows());
  double best = -1e300;
  std::pair<size_t, size_t> out{0, 0};
  for (int i = 0; i < n; ++i) {
    double worst = 1e300;
    int arg = -1;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = mean(i, j) - beta * sd(i, j);
      if (v < worst) {
        worst = v;
        arg = j;
      }
    }
    if (worst > best) {
      best = worst;
      out = {static_cast<size_t>(i), static_cast<size_t>(arg)};
    }
  }
  return out;
}

TEST(MaxMinLcbTest, HandTable) {
  Eigen::MatrixXd mean(3, 3), sd(3, 3);
  mean << 0.0, 0.5, -0.2,
         -0.5, 0.0, -0.9,
          0.2, 0.9, 0.0;
  sd << 0.0, 0.3, 0.4,
        0.3, 0.0, 0.2,
        0.4, 0.2, 0.0;
  // Row minima: row 0 -> -0.6 at j=2, row 1 -> -1.1 at j=2,
  // row 2 -> -0.2 at j=0.
  const PairDecision d = MaxMinLcbChoose(mean, sd, 1.0);
  EXPECT_EQ(d.first, 2u);
  EXPECT_EQ(d.second, 0u);
  EXPECT_NEAR(d.diagnostics.at("lcb"), -0.2, 1e-15);
}

TEST(MaxMinLcbTest, MatchesExhaustiveOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.UniformIndex(5));
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = rng.Normal();
    Eigen::MatrixXd mean(n, n), sd(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        mean(i, j) = u[i] - u[j];
        sd(i, j) = i == j ? 0.0 : rng.Uniform();
      }
    }
    sd = (0.5 * (sd + sd.transpose())).eval();
    const double beta = rng.Uniform() * 2.0;
    const PairDecision d = MaxMinLcbChoose(mean, sd, beta);
    const auto oracle = MaxMinOracle(mean, sd, beta);
    EXPECT_EQ(d.first, oracle.first);
    EXPECT_EQ(d.second, oracle.second);
  }
}

TEST(MaxMinLcbTest, ExactTiesPickLexicographicallyFirst) {
  // Prior tables: h = 0 and a constant off-diagonal sigma.
  const Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(4, 4);
  Eigen::MatrixXd sd = Eigen::MatrixXd::Constant(4, 4, std::sqrt(2.0));
  sd.diagonal().setZero();
  const PairDecision d = MaxMinLcbChoose(mean, sd, 1.0);
  EXPECT_EQ(d.first, 0u);
  EXPECT_EQ(d.second, 1u);
}

TEST(MaxMinLcbTest, PriorOnEquidistantCandidates) {
  // One-hot candidates are pairwise equidistant.
  std::vector<Point> corners;
  for (int i = 0; i < 3; ++i) corners.push_back(Eigen::VectorXd::Unit(3, i));
  const CandidateSet simplex(corners);
  const PrefPosterior post = FitPreferencePosterior({}, kDueling, 0.05, 1.0);
  const PairDecision d = MaxMinLcbSelect(post, simplex, 1.0);
  EXPECT_EQ(d.first, 0u);
  EXPECT_EQ(d.second, 1u);
}

TEST(MaxMinLcbTest, SelectUsesPosteriorTables) {
  const CandidateSet grid = CandidateSet::Grid(1, 8, 0.0, 1.0);
  const PrefPosterior post = FitPreferencePosterior(
      RandomHistory(grid, 30, 3), kDueling, 0.05, 1.0);
  Eigen::MatrixXd mean(8, 8), sd(8, 8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      mean(i, j) = post.Mean({grid[i], grid[j]});
      sd(i, j) = post.StdDev({grid[i], grid[j]});
    }
  }
  const auto oracle = MaxMinOracle(mean, sd, 1.0);
  const PairDecision d = MaxMinLcbSelect(post, grid, 1.0);
  EXPECT_EQ(d.first, oracle.first);
  EXPECT_EQ(d.second, oracle.second);
  EXPECT_NE(d.first, d.second);
}

TEST(MaxMinLcbTest, SinglePointAndShapeChecks) {
  const PairDecision d =
      MaxMinLcbChoose(Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Zero(1, 1),
                      1.0);
  EXPECT_EQ(d.first, 0u);
  EXPECT_EQ(d.second, 0u);
  EXPECT_THROW(MaxMinLcbChoose(Eigen::MatrixXd::Zero(2, 3),
                               Eigen::MatrixXd::Zero(2, 3), 1.0),
               Error);
}

TEST(PopBoTest, HandTableMatchesExhaustive) {
  Eigen::VectorXd mean(4), sd(4);
  mean << 0.0, 0.4, 0.9, 0.1;
  sd << 0.0, 0.6, 0.05, 0.3;
  // ucb = 0, 1.0, 0.95, 0.4 at beta 1.
  EXPECT_EQ(PopBoChoose(mean, sd, 0, 1.0).first, 1u);
  EXPECT_EQ(PopBoChoose(mean, sd, 0, 0.0).first, 2u);
  EXPECT_EQ(PopBoChoose(mean, sd, 3, 1.0).second, 3u);
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    for (int i = 0; i < 4; ++i) {
      mean[i] = rng.Normal();
      sd[i] = rng.Uniform();
    }
    const double beta = rng.Uniform() * 3.0;
    size_t best = 0;
    for (size_t i = 1; i < 4; ++i) {
      if (mean[i] + beta * sd[i] > mean[best] + beta * sd[best]) best = i;
    }
    EXPECT_EQ(PopBoChoose(mean, sd, 2, beta).first, best);
  }
}

TEST(PopBoTest, CarriesAnchor) {
  const CandidateSet grid = CandidateSet::Grid(1, 10, 0.0, 1.0);
  const PrefPosterior post = FitPreferencePosterior(
      RandomHistory(grid, 20, 4), kDueling, 0.05, 1.0);
  EXPECT_EQ(PopBoSelect(post, grid, std::nullopt, 1.0).second, 0u);
  const PairDecision d = PopBoSelect(post, grid, 6, 0.0);
  EXPECT_EQ(d.second, 6u);
  Eigen::VectorXd greedy(10);
  for (size_t i = 0; i < 10; ++i) greedy[i] = post.Mean({grid[i], grid[6]});
  EXPECT_EQ(d.first, static_cast<size_t>(ArgmaxLowest(greedy)));
  EXPECT_THROW(PopBoSelect(post, grid, 10, 1.0), Error);
}

TEST(DuelUcbTest, PriorTieAndDeterminism) {
  const CandidateSet grid = CandidateSet::Grid(1, 10, 0.0, 1.0);
  const PrefPosterior prior = FitPreferencePosterior({}, kDueling, 0.05, 1.0);
  EXPECT_EQ(DuelUcbSelect(prior, grid, grid[4], 0.0), 0u);
  const PrefPosterior post = FitPreferencePosterior(
      RandomHistory(grid, 30, 5), kDueling, 0.05, 1.0);
  EXPECT_EQ(DuelUcbSelect(post, grid, grid[2], 1.0),
            DuelUcbSelect(post, grid, grid[2], 1.0));
  Eigen::VectorXd ucb(10);
  for (size_t i = 0; i < 10; ++i) {
    ucb[i] = post.Mean({grid[i], grid[2]}) + post.StdDev({grid[i], grid[2]});
  }
  EXPECT_EQ(DuelUcbSelect(post, grid, grid[2], 1.0),
            static_cast<size_t>(ArgmaxLowest(ucb)));
}

TEST(RandomSelectTest, UniformChiSquare) {
  const CandidateSet grid = CandidateSet::Grid(1, 10, 0.0, 1.0);
  Rng rng(21);
  std::vector<int> pairs(100, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const PairDecision d = RandomSelect(grid, rng);
    ASSERT_LT(d.first, 10u);
    ASSERT_LT(d.second, 10u);
    ++pairs[d.first * 10 + d.second];
  }
  double chi2 = 0.0;
  for (int c : pairs) chi2 += (c - 100.0) * (c - 100.0) / 100.0;
  // 99th percentile of chi-square with 99 degrees of freedom.
  EXPECT_LT(chi2, 134.64);
  Rng a(4), b(4);
  for (int i = 0; i < 10; ++i) {
    const PairDecision da = RandomSelect(grid, a), db = RandomSelect(grid, b);
    EXPECT_EQ(da.first, db.first);
    EXPECT_EQ(da.second, db.second);
  }
}

}  // namespace
}  // namespace pfts
