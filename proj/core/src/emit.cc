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

#include "pfts/emit.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "pfts/error.h"

namespace pfts {
namespace {

std::string Real(double value) {
  if (std::isnan(value)) return "";
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

nlohmann::json VectorJson(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

void WriteTraceCsv(std::ostream& out, std::span<const RegretTrace> traces,
                   bool timing) {
  out << "policy,seed,t,x_index,x_prime_index,y,obs,r,R,sigma,beta";
  if (timing) out << ",wall_ms";
  out << '\n';
  for (const RegretTrace& trace : traces) {
    for (const RoundRecord& r : trace.rounds) {
      out << trace.policy << ',' << trace.seed << ',' << r.t << ',' << r.first
          << ',' << r.second << ',';
      if (r.label >= 0) out << r.label;
      out << ',' << Real(r.observation) << ',' << Real(r.regret) << ','
          << Real(r.cumulative) << ',' << Real(r.sigma) << ','
          << Real(r.beta);
      if (timing) out << ',' << Real(r.wall_ms);
      out << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing trace CSV");
}

void WriteSummaryJson(std::ostream& out, const SuiteResult& result,
                      const RunConfig& config) {
  nlohmann::json policies = nlohmann::json::object();
  for (const auto& [name, stats] : result.stats) {
    const Eigen::Index last = stats.mean_cumulative.size() - 1;
    policies[name] = {
        {"seeds", stats.seeds},
        {"rounds", stats.mean_regret.size()},
        {"final_mean_cumulative", stats.mean_cumulative[last]},
        {"final_se_cumulative", stats.se_cumulative[last]},
        {"mean_regret", VectorJson(stats.mean_regret)},
        {"se_regret", VectorJson(stats.se_regret)},
        {"mean_cumulative", VectorJson(stats.mean_cumulative)},
        {"se_cumulative", VectorJson(stats.se_cumulative)},
    };
  }
  nlohmann::json failed = nlohmann::json::array();
  for (const RegretTrace& trace : result.traces) {
    if (!trace.error) continue;
    failed.push_back({{"policy", trace.policy},
                      {"seed", trace.seed},
                      {"completed_rounds", trace.rounds.size()},
                      {"error", *trace.error}});
  }
  nlohmann::json root = {
      {"schema_version", 1},
      {"config", nlohmann::json::parse(RunConfigToJson(config))},
      {"policies", policies},
      {"failed_episodes", failed},
  };
  out << root.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "failed writing summary JSON");
}

void WriteCostCsv(std::ostream& out, std::span<const CostCell> cells) {
  out << "policy,xi,budget,round,regret,se\n";
  for (const CostCell& cell : cells) {
    out << cell.policy << ',' << Real(cell.xi) << ',' << cell.budget << ','
        << cell.round << ',';
    if (cell.regret) out << Real(*cell.regret);
    out << ',';
    if (cell.se) out << Real(*cell.se);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing cost CSV");
}

void WriteFile(const std::string& path,
               const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  body(out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path);
}

}  // namespace pfts
