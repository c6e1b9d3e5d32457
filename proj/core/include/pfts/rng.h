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

#ifndef PFTS_RNG_H_
#define PFTS_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace pfts {

// SplitMix64 finalizer. Used to derive independent child seeds.
uint64_t MixSeed(uint64_t x);

// Seeded generator passed explicitly to every stochastic operation. Child
// streams are derived with Split(), which hashes (seed, stream) through
// SplitMix64 so that sibling streams do not overlap in practice.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t seed() const { return seed_; }

  // Independent generator for the named sub-stream. Does not advance *this.
  Rng Split(uint64_t stream) const;

  double Normal();
  double Uniform();  // [0, 1)
  size_t UniformIndex(size_t n);
  bool Bernoulli(double p);

  std::mt19937_64& engine() { return engine_; }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace pfts

#endif  // PFTS_RNG_H_
