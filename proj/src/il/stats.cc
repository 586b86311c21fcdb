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

#include "demoforge/il/stats.h"

#include <cmath>

#include "demoforge/common/error.h"

namespace demoforge::il {

double binomial_upper_tail(int n, int k) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  double total = 0.0;
  for (int i = k; i <= n; ++i) {
    total += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                      std::lgamma(n - i + 1.0) - n * std::log(2.0));
  }
  return std::min(1.0, total);
}

SignTest sign_test(std::span<const bool> candidate,
                   std::span<const bool> baseline) {
  if (candidate.size() != baseline.size()) {
    throw DimensionError("sign test needs paired outcomes");
  }
  SignTest t;
  for (size_t i = 0; i < candidate.size(); ++i) {
    if (candidate[i] && !baseline[i]) ++t.wins;
    else if (!candidate[i] && baseline[i]) ++t.losses;
    else ++t.ties;
  }
  t.p_value = binomial_upper_tail(t.wins + t.losses, t.wins);
  return t;
}

}  // namespace demoforge::il
