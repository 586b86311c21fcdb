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

#ifndef DEMOFORGE_IL_ACTOR_H_
#define DEMOFORGE_IL_ACTOR_H_

#include <cstdint>
#include <vector>

#include "demoforge/env/policy.h"
#include "demoforge/env/task_env.h"
#include "demoforge/nn/gaussian_policy.h"

namespace demoforge::il {

// Observation multipliers that bring each block to order one.
std::vector<double> default_obs_scale(const env::TaskConfig& config);

// A fresh Gaussian policy for the task: obs_dim -> hidden... -> 3, scaled to
// the task's force limit.
nn::GaussianPolicy make_policy(const env::TaskConfig& config,
                               const std::vector<int>& hidden, uint64_t seed,
                               double init_log_std = -1.0);

// Adapts a GaussianPolicy to the rollout interface. Log-probs refer to the
// normalised action u = action / action_scale.
class GaussianActor : public env::Policy {
 public:
  enum class Mode { kMean, kSample };

  GaussianActor(const nn::GaussianPolicy& policy, Mode mode)
      : policy_(policy), mode_(mode) {}

  void begin_episode(uint64_t seed) override { seed_ = seed; }
  env::Decision act(const env::Observation& obs, int t) override;

 private:
  const nn::GaussianPolicy& policy_;
  Mode mode_;
  uint64_t seed_ = 0;
};

}  // namespace demoforge::il

#endif  // DEMOFORGE_IL_ACTOR_H_
