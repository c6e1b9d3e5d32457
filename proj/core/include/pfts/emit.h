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

#ifndef PFTS_EMIT_H_
#define PFTS_EMIT_H_

#include <functional>
#include <ostream>
#include <span>
#include <string>

#include "pfts/bench.h"

namespace pfts {

// Long format, one row per (policy, seed, round):
//   policy,seed,t,x_index,x_prime_index,y,obs,r,R,sigma,beta[,wall_ms]
// Reals use %.17g. Fields that do not apply to a policy are left empty.
// Wall-clock time is off by default so that the output is byte-identical
// across reruns.
void WriteTraceCsv(std::ostream& out, std::span<const RegretTrace> traces,
                   bool timing = false);

// {"schema_version": 1, "config": ..., "policies": {name: {...}},
//  "failed_episodes": [...]}
void WriteSummaryJson(std::ostream& out, const SuiteResult& result,
                      const RunConfig& config);

// policy,xi,budget,round,regret,se
void WriteCostCsv(std::ostream& out, std::span<const CostCell> cells);

// Opens path for writing and throws kIo on failure.
void WriteFile(const std::string& path,
               const std::function<void(std::ostream&)>& body);

}  // namespace pfts

#endif  // PFTS_EMIT_H_
