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
#include "pfts/pref_inference.h"
#include "pfts/run_config.h"

namespace pfts {
namespace {

PrefPosterior Fitted(const Environment& env) {
  Rng rng(5);
  BtlOracle oracle(env.utility, rng.Split(2));
  PreferenceHistory h;
  for (int i = 0; i < 100; ++i) {
    const size_t a = rng.UniformIndex(env.candidates.size());
    const size_t b = rng.UniformIndex(env.candidates.size());
    h.Append(env.candidates[a], env.candidates[b], oracle.Query(a, b));
  }
  return FitPreferencePosterior(h, DuelingKernel{BaseKernel{}}, 0.05, 1.0);
}

void BM_PftsSelect(benchmark::State& state) {
  const Environment env = MakeAckleyEnvironment(1, 40, -5.0, 5.0);
  const PrefPosterior post = Fitted(env);
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(PftsSelect(post, env.candidates, 1.0, rng));
  }
}
BENCHMARK(BM_PftsSelect)->Unit(benchmark::kMicrosecond);

void BM_MaxMinLcbSelect(benchmark::State& state) {
  const Environment env = MakeAckleyEnvironment(1, 40, -5.0, 5.0);
  const PrefPosterior post = Fitted(env);
  for (auto _ : state) {
    benchmark::DoNotOptimize(MaxMinLcbSelect(post, env.candidates, 1.0));
  }
}
BENCHMARK(BM_MaxMinLcbSelect)->Unit(benchmark::kMicrosecond);

void BM_Episode(benchmark::State& state) {
  RunConfig config;
  config.horizon = state.range(0);
  const Environment env = BuildEnvironment(config);
  PolicySpec pfts;
  pfts.name = "pfts";
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunEpisode(env, config, pfts, 1));
  }
}
BENCHMARK(BM_Episode)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace pfts

BENCHMARK_MAIN();
