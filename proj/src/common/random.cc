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

#include "demoforge/common/random.h"

#include <cmath>
#include <numbers>

namespace demoforge {
namespace {

double to_open_unit(uint64_t bits) {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

uint64_t CounterRng::bits(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  h = mix64(h ^ a);
  h = mix64(h ^ (b * 0xd1342543de82ef95ULL));
  h = mix64(h ^ (c * 0x2545f4914f6cdd1dULL));
  return h;
}

double CounterRng::uniform(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  return to_open_unit(bits(seed, a, b, c));
}

double CounterRng::normal(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  const uint64_t h = bits(seed, a, b, c);
  const double u1 = to_open_unit(h);
  const double u2 = to_open_unit(mix64(h ^ 0x632be59bd9b4e019ULL));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::uniform() { return to_open_unit(next_u64()); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

}  // namespace demoforge
