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

#include "pfts/rng.h"

namespace pfts {

uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(uint64_t seed) : seed_(seed), engine_(MixSeed(seed)) {}

Rng Rng::Split(uint64_t stream) const {
  return Rng(MixSeed(seed_ ^ MixSeed(stream + 0x632be59bd9b4e019ULL)));
}

double Rng::Normal() { return normal_(engine_); }

double Rng::Uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

size_t Rng::UniformIndex(size_t n) {
  return std::uniform_int_distribution<size_t>(0, n - 1)(engine_);
}

bool Rng::Bernoulli(double p) { return Uniform() < p; }

}  // namespace pfts
