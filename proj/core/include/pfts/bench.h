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

#ifndef PFTS_BENCH_H_
#define PFTS_BENCH_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pfts/environments.h"
#include "pfts/run_config.h"

namespace pfts {

// Sub-stream ids split off each master seed. The oracle stream does not
// depend on the policy, so every policy in a suite sees the same
// environment randomness.
inline constexpr uint64_t kPolicyStream = 1;
inline constexpr uint64_t kOracleStream = 2;

struct RoundRecord {
  int t = 0;
  size_t first = 0;
  size_t second = 0;
  int label = -1;           // preference bit; -1 for scalar feedback
  double observation = 0;   // scalar feedback; NaN for preferences
  double regret = 0;
  double cumulative = 0;
  double sigma = 0;         // sigma_{t-1}(x_t, x'_t); NaN when not modeled
  double beta = 0;          // beta_t(delta); NaN when not modeled
  double wall_ms = 0;
};

struct RegretTrace {
  std::string policy;
  uint64_t seed = 0;
  std::vector<RoundRecord> rounds;
  std::optional<std::string> error;
};

// Rounds t = 1..T: refit on H_{t-1}, select, query the oracle, record the
// dueling regret. Scalar-feedback policies play x'_t = x_t. Numeric failures
// end the episode early with `error` set.
RegretTrace RunEpisode(const Environment& env, const RunConfig& config,
                       const PolicySpec& policy, uint64_t seed);

struct RoundStats {
  int seeds = 0;
  Eigen::VectorXd mean_regret;
  Eigen::VectorXd se_regret;
  Eigen::VectorXd mean_cumulative;
  Eigen::VectorXd se_cumulative;
};

// Per-round mean and standard error (sample SD / sqrt(n)) across complete
// traces. A single trace has zero standard error.
RoundStats Aggregate(std::span<const RegretTrace> traces);

struct SuiteResult {
  std::vector<RegretTrace> traces;  // policy-major, seed order of config
  std::map<std::string, RoundStats> stats;
  int failed_episodes = 0;
};

// Every policy x seed, optionally in parallel; merged deterministically.
SuiteResult RunSuite(const Environment& env, const RunConfig& config);
SuiteResult RunSuite(const RunConfig& config);

struct CostCell {
  std::string policy;
  double xi = 1.0;
  int budget = 0;
  int round = 0;  // 0 when the budget buys no iteration
  std::optional<double> regret;
  std::optional<double> se;
};

// Budgets c = step, 2 step, ..., max_budget. The preference policy reports
// round c; the scalar policy reports round floor(c / xi), missing when 0.
std::vector<CostCell> CostAdjusted(const RoundStats& preference,
                                   const RoundStats& scalar,
                                   std::span<const double> xis, int step,
                                   int max_budget,
                                   const std::string& preference_name = "pfts",
                                   const std::string& scalar_name = "gpts");

}  // namespace pfts

#endif  // PFTS_BENCH_H_
