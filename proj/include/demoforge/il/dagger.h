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

#ifndef DEMOFORGE_IL_DAGGER_H_
#define DEMOFORGE_IL_DAGGER_H_

#include <cstdint>
#include <vector>

#include "demoforge/env/expert.h"
#include "demoforge/env/task_env.h"
#include "demoforge/il/bc.h"
#include "demoforge/il/dataset.h"
#include "demoforge/nn/gaussian_policy.h"

namespace demoforge::il {

struct DaggerConfig {
  int rounds = 5;
  int episodes_per_round = 1;
  // Environment of the expert demonstrations used in round 1.
  env::TaskConfig expert_task;
  // Environment the learner is rolled out in from round 2 on.
  env::TaskConfig learner_task;
  // Control-step cap for learner rollouts.
  int learner_max_steps = 300;
  env::ScriptedExpertConfig expert;
  BcConfig bc;
  std::vector<int> hidden{64, 64};
  double init_log_std = -1.0;

  void validate() const;
};

// Expert config with waypoints derived from the nanotube geometry; learner
// jitter widened to `learner_jitter`.
DaggerConfig default_dagger_config(double learner_jitter = 0.3);

struct DaggerResult {
  nn::GaussianPolicy policy;
  // Aggregated dataset after each round.
  std::vector<ExpertDataset> datasets;
  // Learner rollout lengths added in each round (empty for round 1).
  std::vector<std::vector<size_t>> rollout_lengths;
  std::vector<BcResult> fits;
};

// Seeds of the round-1 expert episodes.
std::vector<uint64_t> dagger_expert_seeds(const DaggerConfig& config,
                                          uint64_t seed);

// Round 1 fits BC on expert rollouts. Every later round rolls the current
// policy out (mean actions), relabels each visited state with
// expert_action, aggregates and refits from the same initial weights and
// seed.
DaggerResult dagger_train(const DaggerConfig& config, uint64_t seed);

// The round-1 expert dataset on its own.
ExpertDataset dagger_expert_dataset(const DaggerConfig& config, uint64_t seed);

}  // namespace demoforge::il

#endif  // DEMOFORGE_IL_DAGGER_H_
