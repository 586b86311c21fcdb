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

#ifndef DEMOFORGE_IL_STATS_H_
#define DEMOFORGE_IL_STATS_H_

#include <span>

namespace demoforge::il {

struct SignTest {
  int wins = 0;    // pairs where the candidate succeeded and the baseline not
  int losses = 0;  // the reverse
  int ties = 0;
  // P(X >= wins) for X ~ Binomial(wins + losses, 1/2); 1 without
  // discordant pairs.
  double p_value = 1.0;
};

// One-sided paired sign test of "candidate better than baseline".
SignTest sign_test(std::span<const bool> candidate,
                   std::span<const bool> baseline);

double binomial_upper_tail(int n, int k);

}  // namespace demoforge::il

#endif  // DEMOFORGE_IL_STATS_H_
