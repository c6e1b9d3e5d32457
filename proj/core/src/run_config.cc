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

#include "pfts/run_config.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pfts/error.h"

namespace pfts {
namespace {

using nlohmann::json;

[[noreturn]] void ConfigError(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::kConfig, "config key '" + key + "': " + what);
}

template <typename T>
void Read(const json& object, const char* key, const std::string& path,
          T* out) {
  auto it = object.find(key);
  if (it == object.end()) return;
  try {
    *out = it->get<T>();
  } catch (const json::exception& e) {
    ConfigError(path + key, e.what());
  }
}

void CheckKeys(const json& object, const std::string& path,
               std::initializer_list<const char*> allowed) {
  if (!object.is_object()) ConfigError(path, "expected an object");
  std::set<std::string> names(allowed.begin(), allowed.end());
  for (auto it = object.begin(); it != object.end(); ++it) {
    if (!names.count(it.key())) ConfigError(path + it.key(), "unknown key");
  }
}

KernelFamily ParseFamily(const std::string& name, const std::string& key) {
  if (name == "matern") return KernelFamily::kMatern;
  if (name == "squared_exponential" || name == "se") {
    return KernelFamily::kSquaredExponential;
  }
  ConfigError(key, "unknown kernel family '" + name + "'");
}

std::string FamilyName(KernelFamily family) {
  return family == KernelFamily::kMatern ? "matern" : "squared_exponential";
}

ExplorationSchedule ParseExploration(const json& object,
                                     const std::string& path) {
  CheckKeys(object, path, {"schedule", "delta", "value"});
  ExplorationSchedule schedule;
  std::string kind = "practical";
  Read(object, "schedule", path, &kind);
  if (kind == "practical") {
    schedule.kind = ExplorationKind::kPractical;
  } else if (kind == "theory") {
    schedule.kind = ExplorationKind::kTheory;
  } else if (kind == "constant") {
    schedule.kind = ExplorationKind::kConstant;
  } else {
    ConfigError(path + "schedule", "unknown schedule '" + kind + "'");
  }
  Read(object, "delta", path, &schedule.delta);
  Read(object, "value", path, &schedule.constant);
  return schedule;
}

std::string ScheduleName(ExplorationKind kind) {
  switch (kind) {
    case ExplorationKind::kPractical: return "practical";
    case ExplorationKind::kTheory: return "theory";
    case ExplorationKind::kConstant: return "constant";
  }
  return "practical";
}

}  // namespace

RunConfig ParseRunConfig(const std::string& json_text,
                         const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, std::string("malformed config: ") + e.what());
  }
  CheckKeys(root, "", {"environment", "kernel", "inference", "policies",
                       "horizon", "seeds", "output", "threads"});
  RunConfig config;

  if (auto it = root.find("environment"); it != root.end()) {
    const std::string p = "environment.";
    CheckKeys(*it, p,
              {"kind", "dim", "grid_points", "lo", "hi", "norm",
               "utility_seed", "path", "features", "utility", "rescale",
               "normalize_features", "scalar_noise_sd"});
    EnvironmentSpec& env = config.environment;
    Read(*it, "kind", p, &env.kind);
    if (env.kind == "rkhs") {
      env.grid_points = 30;
      env.lo = 0.0;
      env.hi = 1.0;
    }
    Read(*it, "dim", p, &env.dim);
    Read(*it, "grid_points", p, &env.grid_points);
    Read(*it, "lo", p, &env.lo);
    Read(*it, "hi", p, &env.hi);
    Read(*it, "norm", p, &env.norm);
    Read(*it, "utility_seed", p, &env.utility_seed);
    Read(*it, "path", p, &env.path);
    Read(*it, "features", p, &env.features);
    Read(*it, "utility", p, &env.utility_column);
    Read(*it, "normalize_features", p, &env.normalize_features);
    Read(*it, "scalar_noise_sd", p, &env.scalar_noise_sd);
    if (auto r = it->find("rescale"); r != it->end() && !r->is_null()) {
      const std::string rp = p + "rescale.";
      CheckKeys(*r, rp, {"mode", "lo", "hi", "divisor"});
      RescaleSpec spec;
      std::string mode = "minmax";
      Read(*r, "mode", rp, &mode);
      if (mode == "minmax") {
        spec.mode = RescaleSpec::Mode::kMinMax;
      } else if (mode == "divide") {
        spec.mode = RescaleSpec::Mode::kDivide;
      } else {
        ConfigError(rp + "mode", "expected 'minmax' or 'divide'");
      }
      Read(*r, "lo", rp, &spec.lo);
      Read(*r, "hi", rp, &spec.hi);
      Read(*r, "divisor", rp, &spec.divisor);
      env.rescale = spec;
    }
    if (!env.path.empty() && !base_dir.empty() &&
        std::filesystem::path(env.path).is_relative()) {
      env.path = (std::filesystem::path(base_dir) / env.path).string();
    }
  }

  if (auto it = root.find("kernel"); it != root.end()) {
    const std::string p = "kernel.";
    CheckKeys(*it, p, {"family", "lengthscale", "nu", "signal_variance"});
    std::string family = FamilyName(config.kernel.family);
    Read(*it, "family", p, &family);
    config.kernel.family = ParseFamily(family, p + "family");
    Read(*it, "lengthscale", p, &config.kernel.lengthscale);
    Read(*it, "nu", p, &config.kernel.nu);
    Read(*it, "signal_variance", p, &config.kernel.signal_variance);
  }

  if (auto it = root.find("inference"); it != root.end()) {
    const std::string p = "inference.";
    CheckKeys(*it, p, {"lambda", "norm_bound"});
    Read(*it, "lambda", p, &config.lambda);
    Read(*it, "norm_bound", p, &config.norm_bound);
  }

  if (auto it = root.find("policies"); it != root.end()) {
    if (!it->is_array()) ConfigError("policies", "expected an array");
    for (size_t i = 0; i < it->size(); ++i) {
      const json& item = (*it)[i];
      const std::string p = "policies[" + std::to_string(i) + "].";
      PolicySpec spec;
      if (item.is_string()) {
        spec.name = item.get<std::string>();
      } else {
        CheckKeys(item, p, {"name", "beta", "lambda", "exploration"});
        Read(item, "name", p, &spec.name);
        Read(item, "beta", p, &spec.beta);
        if (item.contains("lambda")) {
          double value = 0.0;
          Read(item, "lambda", p, &value);
          spec.scalar_lambda = value;
        }
        if (auto e = item.find("exploration"); e != item.end()) {
          spec.exploration = ParseExploration(*e, p + "exploration.");
        }
      }
      config.policies.push_back(spec);
    }
  }

  Read(root, "horizon", "", &config.horizon);
  if (auto it = root.find("seeds"); it != root.end()) {
    if (it->is_array()) {
      Read(root, "seeds", "", &config.seeds);
    } else {
      CheckKeys(*it, "seeds.", {"first", "count"});
      uint64_t first = 1;
      int count = 1;
      Read(*it, "first", "seeds.", &first);
      Read(*it, "count", "seeds.", &count);
      if (count < 1) ConfigError("seeds.count", "must be >= 1");
      config.seeds.clear();
      for (int i = 0; i < count; ++i) config.seeds.push_back(first + i);
    }
  }
  Read(root, "output", "", &config.output);
  Read(root, "threads", "", &config.threads);
  ValidateRunConfig(config);
  return config;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return ParseRunConfig(buffer.str(), parent.string());
}

void ValidateRunConfig(const RunConfig& config) {
  if (config.horizon < 1) ConfigError("horizon", "must be >= 1");
  if (config.seeds.empty()) ConfigError("seeds", "must be nonempty");
  if (config.policies.empty()) ConfigError("policies", "must be nonempty");
  if (!(config.lambda > 0.0)) ConfigError("inference.lambda", "must be > 0");
  if (!(config.norm_bound >= 0.0)) {
    ConfigError("inference.norm_bound", "must be >= 0");
  }
  try {
    config.kernel.Validate();
  } catch (const Error& e) {
    ConfigError("kernel", e.what());
  }
  const EnvironmentSpec& env = config.environment;
  if (env.kind == "tabular") {
    if (env.path.empty()) ConfigError("environment.path", "required");
    if (env.features.empty()) ConfigError("environment.features", "required");
    if (env.utility_column.empty()) {
      ConfigError("environment.utility", "required");
    }
  } else if (env.kind == "ackley" || env.kind == "rkhs") {
    if (env.dim < 1) ConfigError("environment.dim", "must be >= 1");
    if (env.grid_points < 1) {
      ConfigError("environment.grid_points", "must be >= 1");
    }
    if (!(env.lo <= env.hi)) ConfigError("environment.lo", "must be <= hi");
  } else {
    ConfigError("environment.kind", "unknown environment '" + env.kind + "'");
  }
  std::set<std::string> seen;
  for (const PolicySpec& policy : config.policies) {
    static const std::set<std::string> kKnown = {"pfts", "gpts", "maxminlcb",
                                                 "popbo", "random"};
    if (!kKnown.count(policy.name)) {
      ConfigError("policies", "unknown policy '" + policy.name + "'");
    }
    if (!seen.insert(policy.name).second) {
      ConfigError("policies", "duplicate policy '" + policy.name + "'");
    }
    if (policy.name == "gpts" &&
        policy.exploration.kind == ExplorationKind::kTheory) {
      ConfigError("policies", "gpts does not support the theory schedule");
    }
    if (policy.scalar_lambda && !(*policy.scalar_lambda > 0.0)) {
      ConfigError("policies", "lambda must be > 0");
    }
    if (!(policy.exploration.delta > 0.0 && policy.exploration.delta < 1.0)) {
      ConfigError("policies", "exploration.delta must lie in (0, 1)");
    }
  }
}

const PolicySpec& FindPolicy(const RunConfig& config, const std::string& name) {
  for (const PolicySpec& policy : config.policies) {
    if (policy.name == name) return policy;
  }
  ConfigError("policies", "policy '" + name + "' is not configured");
}

Environment BuildEnvironment(const RunConfig& config) {
  const EnvironmentSpec& spec = config.environment;
  if (spec.kind == "ackley") {
    return MakeAckleyEnvironment(spec.dim, spec.grid_points, spec.lo, spec.hi);
  }
  if (spec.kind == "rkhs") {
    return MakeRkhsEnvironment(config.kernel, spec.grid_points, spec.lo,
                               spec.hi, spec.norm, spec.utility_seed);
  }
  TabularData data = LoadTabular(spec.path, spec.features, spec.utility_column,
                                 spec.rescale);
  if (!spec.normalize_features) {
    return {"tabular", std::move(data.candidates), std::move(data.utility)};
  }
  std::vector<Point> points = data.candidates.points();
  const Eigen::Index d = points[0].size();
  for (Eigen::Index k = 0; k < d; ++k) {
    auto [lo, hi] = data.candidates.bounds()[k];
    for (Point& p : points) p[k] = hi > lo ? (p[k] - lo) / (hi - lo) : 0.0;
  }
  CandidateSet candidates(std::move(points));
  Utility utility =
      Utility::Tabular(candidates, data.utility.grid_values());
  return {"tabular", std::move(candidates), std::move(utility)};
}

std::string RunConfigToJson(const RunConfig& config) {
  const EnvironmentSpec& env = config.environment;
  json environment = {{"kind", env.kind}};
  if (env.kind == "tabular") {
    environment["path"] = env.path;
    environment["features"] = env.features;
    environment["utility"] = env.utility_column;
    environment["normalize_features"] = env.normalize_features;
    if (env.rescale) {
      environment["rescale"] = {
          {"mode", env.rescale->mode == RescaleSpec::Mode::kMinMax ? "minmax"
                                                                   : "divide"},
          {"lo", env.rescale->lo},
          {"hi", env.rescale->hi},
          {"divisor", env.rescale->divisor}};
    }
  } else {
    environment["dim"] = env.dim;
    environment["grid_points"] = env.grid_points;
    environment["lo"] = env.lo;
    environment["hi"] = env.hi;
    if (env.kind == "rkhs") {
      environment["norm"] = env.norm;
      environment["utility_seed"] = env.utility_seed;
    }
  }
  environment["scalar_noise_sd"] = env.scalar_noise_sd;

  json policies = json::array();
  for (const PolicySpec& p : config.policies) {
    policies.push_back(
        {{"name", p.name},
         {"beta", p.beta},
         {"lambda", p.scalar_lambda.value_or(config.lambda)},
         {"exploration",
          {{"schedule", ScheduleName(p.exploration.kind)},
           {"delta", p.exploration.delta},
           {"value", p.exploration.constant}}}});
  }
  json root = {
      {"environment", environment},
      {"kernel",
       {{"family", FamilyName(config.kernel.family)},
        {"lengthscale", config.kernel.lengthscale},
        {"nu", config.kernel.nu},
        {"signal_variance", config.kernel.signal_variance}}},
      {"inference",
       {{"lambda", config.lambda}, {"norm_bound", config.norm_bound}}},
      {"policies", policies},
      {"horizon", config.horizon},
      {"seeds", config.seeds},
      {"output", config.output},
  };
  return root.dump(2);
}

}  // namespace pfts
