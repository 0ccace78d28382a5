// Copyright 2026 The AdmmGuard Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADMMGUARD_RNG_H_
#define ADMMGUARD_RNG_H_

#include <cstdint>
#include <random>

namespace admmguard {

// Mixes (seed, index) into an independent 64-bit seed (SplitMix64 finalizer).
// Used to give every problem instance and every attacked iterate its own
// stream, so results do not depend on execution order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Seeded random stream. The bit-to-value mappings live here rather than in
// <random> distributions, whose output is implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_bits() { return engine_(); }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi);

  // Uniform integer on [lo, hi], unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Fair +1 / -1.
  double sign();

 private:
  std::mt19937_64 engine_;
};

}  // namespace admmguard

#endif  // ADMMGUARD_RNG_H_
