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

#ifndef PFTS_RUN_CONFIG_H_
#define PFTS_RUN_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pfts/environments.h"
#include "pfts/kernels.h"
#include "pfts/policies.h"

namespace pfts {

struct EnvironmentSpec {
  std::string kind = "ackley";  // ackley | rkhs | tabular

  // ackley and rkhs grids.
  int dim = 1;
  int grid_points = 40;
  double lo = -5.0;
  double hi = 5.0;

  // rkhs
  double norm = 2.0;
  uint64_t utility_seed = 0;

  // tabular
  std::string path;
  std::vector<std::string> features;
  std::string utility_column;
  std::optional<RescaleSpec> rescale;
  // Min-max scales every feature column to [0, 1] before use.
  bool normalize_features = false;

  // Standard deviation of scalar (GP-TS) observation noise.
  double scalar_noise_sd = 1.0;
};

struct PolicySpec {
  std::string name;  // pfts | gpts | maxminlcb | popbo | random
  double beta = 1.0;            // maxminlcb, popbo
  // gpts ridge weight; the preference lambda when unset.
  std::optional<double> scalar_lambda;
  ExplorationSchedule exploration;  // pfts, gpts
};

struct RunConfig {
  EnvironmentSpec environment;
  BaseKernel kernel;
  double lambda = 0.05;
  double norm_bound = 1.0;
  std::vector<PolicySpec> policies;
  int horizon = 300;
  std::vector<uint64_t> seeds = {1};
  std::string output;
  int threads = 0;  // 0 = hardware concurrency
};

// Parses the JSON run configuration. Relative tabular paths resolve against
// base_dir. Throws kConfig with the offending key.
RunConfig ParseRunConfig(const std::string& json_text,
                         const std::string& base_dir = "");
RunConfig LoadRunConfig(const std::string& path);

// Throws kConfig: horizon < 1, no seeds, no policies, unknown names.
void ValidateRunConfig(const RunConfig& config);

const PolicySpec& FindPolicy(const RunConfig& config, const std::string& name);

Environment BuildEnvironment(const RunConfig& config);

// Canonical JSON echo of a configuration.
std::string RunConfigToJson(const RunConfig& config);

}  // namespace pfts

#endif  // PFTS_RUN_CONFIG_H_
