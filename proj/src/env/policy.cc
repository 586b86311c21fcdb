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

#include "demoforge/env/policy.h"

#include <cmath>

#include "demoforge/common/random.h"

namespace demoforge::env {

ExpertPolicy::ExpertPolicy(ScriptedExpertConfig config)
    : config_(std::move(config)) {
  config_.validate();
}

Decision RandomPolicy::act(const Observation&, int t) {
  Decision d;
  for (int k = 0; k < 3; ++k) {
    const double u = CounterRng::uniform(seed_ ^ 0x72616e64ULL,
                                         static_cast<uint64_t>(t),
                                         static_cast<uint64_t>(k));
    d.action[k] = max_force_ * (2.0 * u - 1.0);
  }
  d.log_prob = -3.0 * std::log(2.0 * max_force_);
  return d;
}

}  // namespace demoforge::env
