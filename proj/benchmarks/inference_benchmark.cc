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

#include <benchmark/benchmark.h>

#include "pfts/bench.h"
#include "pfts/environments.h"
#include "pfts/pref_inference.h"

namespace pfts {
namespace {

PreferenceHistory History(const Environment& env, int rounds) {
  const Rng root(7);
  Rng pick = root.Split(kPolicyStream);
  BtlOracle oracle(env.utility, root.Split(kOracleStream));
  PreferenceHistory h;
  for (int i = 0; i < rounds; ++i) {
    const size_t a = pick.UniformIndex(env.candidates.size());
    const size_t b = pick.UniformIndex(env.candidates.size());
    h.Append(env.candidates[a], env.candidates[b], oracle.Query(a, b));
  }
  return h;
}

void BM_Fit(benchmark::State& state) {
  const Environment env = MakeAckleyEnvironment(1, 40, -5.0, 5.0);
  const PreferenceHistory h = History(env, state.range(0));
  const DuelingKernel k{BaseKernel{}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(FitPreferencePosterior(h, k, 0.05, 1.0));
  }
}
BENCHMARK(BM_Fit)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_SamplePosterior(benchmark::State& state) {
  const Environment env = MakeAckleyEnvironment(1, state.range(0), -5.0, 5.0);
  const PrefPosterior post =
      FitPreferencePosterior(History(env, 200), DuelingKernel{BaseKernel{}},
                             0.05, 1.0);
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        SamplePosterior(post, env.candidates, env.candidates[0], 1.0, rng));
  }
}
BENCHMARK(BM_SamplePosterior)->Arg(40)->Arg(200)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace pfts
