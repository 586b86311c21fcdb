// Copyright 2026 The Demoforge Authors
//
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

#ifndef DEMOFORGE_COMMON_RANDOM_H_
#define DEMOFORGE_COMMON_RANDOM_H_

#include <cstdint>

namespace demoforge {

// SplitMix64 finalizer.
constexpr uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stateless generator: every draw is a pure function of its key, so replays
// and parallel rollouts see identical noise regardless of evaluation order.
class CounterRng {
 public:
  static uint64_t bits(uint64_t seed, uint64_t a, uint64_t b = 0,
                       uint64_t c = 0);
  // Uniform in the open interval (0, 1).
  static double uniform(uint64_t seed, uint64_t a, uint64_t b = 0,
                        uint64_t c = 0);
  static double normal(uint64_t seed, uint64_t a, uint64_t b = 0,
                       uint64_t c = 0);
};

// Sequential generator for initialization and sampling where a stream is
// more convenient than explicit keys. Output is identical on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_ - 0x9e3779b97f4a7c15ULL);
  }
  // Uniform in (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) { return next_u64() % n; }

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace demoforge

#endif  // DEMOFORGE_COMMON_RANDOM_H_
