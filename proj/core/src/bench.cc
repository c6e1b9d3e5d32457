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

#include "pfts/bench.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "pfts/error.h"
#include "pfts/policies.h"
#include "pfts/pref_inference.h"
#include "pfts/scalar_gp.h"

namespace pfts {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

void RecordRegret(const Utility& utility, RoundRecord* record,
                  double previous_cumulative) {
  record->regret = InstantaneousRegret(utility, record->first, record->second);
  record->cumulative = previous_cumulative + record->regret;
}

}  // namespace

RegretTrace RunEpisode(const Environment& env, const RunConfig& config,
                       const PolicySpec& policy, uint64_t seed) {
  RegretTrace trace;
  trace.policy = policy.name;
  trace.seed = seed;
  trace.rounds.reserve(config.horizon);

  const Rng master(seed);
  Rng policy_rng = master.Split(kPolicyStream);
  Rng oracle_rng = master.Split(kOracleStream);
  BtlOracle oracle(env.utility, master.Split(kOracleStream));

  const CandidateSet& candidates = env.candidates;
  const DuelingKernel dueling{config.kernel};
  PreferenceHistory history;
  std::vector<Point> scalar_points;
  std::vector<double> scalar_values;
  std::optional<size_t> carried;
  double cumulative = 0.0;

  const bool scalar = policy.name == "gpts";
  try {
    for (int t = 1; t <= config.horizon; ++t) {
      const auto start = Clock::now();
      RoundRecord record;
      record.t = t;
      record.observation = kNaN;
      record.sigma = kNaN;
      record.beta = kNaN;

      if (scalar) {
        ScalarPosterior posterior = FitScalarPosterior(
            scalar_points, scalar_values, config.kernel,
            policy.scalar_lambda.value_or(config.lambda));
        const double scale = ExplorationScale(policy.exploration, t, nullptr);
        const size_t x = GptsSelect(posterior, candidates, scale, policy_rng);
        record.first = record.second = x;
        record.sigma =
            std::sqrt(std::max(0.0, posterior.MeanVar(candidates[x]).second));
        record.observation = ScalarFeedback(env.utility, x, oracle_rng,
                                            config.environment.scalar_noise_sd);
        scalar_points.push_back(candidates[x]);
        scalar_values.push_back(record.observation);
      } else {
        PairDecision decision;
        if (policy.name == "random") {
          decision = RandomSelect(candidates, policy_rng);
        } else {
          PrefPosterior posterior = FitPreferencePosterior(
              history, dueling, config.lambda, config.norm_bound);
          if (policy.name == "pfts") {
            const double scale =
                ExplorationScale(policy.exploration, t, &posterior);
            decision = PftsSelect(posterior, candidates, scale, policy_rng);
            record.beta = posterior.Beta(policy.exploration.delta);
          } else if (policy.name == "maxminlcb") {
            decision = MaxMinLcbSelect(posterior, candidates, policy.beta);
            record.beta = policy.beta;
          } else if (policy.name == "popbo") {
            decision =
                PopBoSelect(posterior, candidates, carried, policy.beta);
            carried = decision.first;
            record.beta = policy.beta;
          } else {
            throw Error(ErrorCode::kConfig,
                        "unknown policy '" + policy.name + "'");
          }
          record.sigma = posterior.StdDev(
              {candidates[decision.first], candidates[decision.second]});
        }
        record.first = decision.first;
        record.second = decision.second;
        record.label = oracle.Query(record.first, record.second);
        history.Append(candidates[record.first], candidates[record.second],
                       record.label);
      }
      RecordRegret(env.utility, &record, cumulative);
      cumulative = record.cumulative;
      record.wall_ms = MillisSince(start);
      trace.rounds.push_back(record);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    trace.error = std::string(ErrorCodeName(e.code())) + ": " + e.what();
  }
  return trace;
}

RoundStats Aggregate(std::span<const RegretTrace> traces) {
  RoundStats stats;
  size_t horizon = std::numeric_limits<size_t>::max();
  for (const RegretTrace& trace : traces) {
    if (trace.error) continue;
    horizon = std::min(horizon, trace.rounds.size());
    ++stats.seeds;
  }
  if (stats.seeds == 0) {
    throw Error(ErrorCode::kEmptyData, "no complete traces to aggregate");
  }
  const Eigen::Index len = static_cast<Eigen::Index>(horizon);
  const int n = stats.seeds;
  Eigen::MatrixXd regret(len, n), cumulative(len, n);
  int column = 0;
  for (const RegretTrace& trace : traces) {
    if (trace.error) continue;
    for (Eigen::Index t = 0; t < len; ++t) {
      regret(t, column) = trace.rounds[t].regret;
      cumulative(t, column) = trace.rounds[t].cumulative;
    }
    ++column;
  }
  auto summarize = [n](const Eigen::MatrixXd& values, Eigen::VectorXd* mean,
                       Eigen::VectorXd* se) {
    *mean = values.rowwise().mean();
    *se = Eigen::VectorXd::Zero(values.rows());
    if (n < 2) return;
    for (Eigen::Index t = 0; t < values.rows(); ++t) {
      const double ss = (values.row(t).array() - (*mean)[t]).square().sum();
      (*se)[t] = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
    }
  };
  summarize(regret, &stats.mean_regret, &stats.se_regret);
  summarize(cumulative, &stats.mean_cumulative, &stats.se_cumulative);
  return stats;
}

SuiteResult RunSuite(const Environment& env, const RunConfig& config) {
  ValidateRunConfig(config);
  const size_t per_policy = config.seeds.size();
  const size_t jobs = config.policies.size() * per_policy;
  SuiteResult result;
  result.traces.resize(jobs);

  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (size_t job = next++; job < jobs; job = next++) {
      const PolicySpec& policy = config.policies[job / per_policy];
      const uint64_t seed = config.seeds[job % per_policy];
      try {
        result.traces[job] = RunEpisode(env, config, policy, seed);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  size_t threads = config.threads > 0
                       ? static_cast<size_t>(config.threads)
                       : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (size_t p = 0; p < config.policies.size(); ++p) {
    std::span<const RegretTrace> slice(result.traces.data() + p * per_policy,
                                       per_policy);
    for (const RegretTrace& trace : slice) {
      if (trace.error) ++result.failed_episodes;
    }
    const bool any_complete =
        std::any_of(slice.begin(), slice.end(),
                    [](const RegretTrace& trace) { return !trace.error; });
    if (any_complete) {
      result.stats[config.policies[p].name] = Aggregate(slice);
    }
  }
  return result;
}

SuiteResult RunSuite(const RunConfig& config) {
  ValidateRunConfig(config);
  return RunSuite(BuildEnvironment(config), config);
}

std::vector<CostCell> CostAdjusted(const RoundStats& preference,
                                   const RoundStats& scalar,
                                   std::span<const double> xis, int step,
                                   int max_budget,
                                   const std::string& preference_name,
                                   const std::string& scalar_name) {
  if (step < 1 || max_budget < step) {
    throw Error(ErrorCode::kInvalidArgument,
                "cost ladder needs step >= 1 and max_budget >= step");
  }
  for (double xi : xis) {
    if (!(xi >= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "cost ratio must be >= 1");
    }
  }
  auto lookup = [](const RoundStats& stats, int round, CostCell* cell) {
    cell->round = round;
    if (round >= 1 && round <= stats.mean_regret.size()) {
      cell->regret = stats.mean_regret[round - 1];
      cell->se = stats.se_regret[round - 1];
    }
  };
  std::vector<CostCell> cells;
  for (double xi : xis) {
    for (int c = step; c <= max_budget; c += step) {
      CostCell pref{preference_name, xi, c, 0, std::nullopt, std::nullopt};
      lookup(preference, c, &pref);
      cells.push_back(pref);
      CostCell scal{scalar_name, xi, c, 0, std::nullopt, std::nullopt};
      lookup(scalar, static_cast<int>(std::floor(c / xi + 1e-12)), &scal);
      cells.push_back(scal);
    }
  }
  return cells;
}

}  // namespace pfts
