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

#include "demoforge/il/dagger.h"

#include "demoforge/common/error.h"
#include "demoforge/common/random.h"
#include "demoforge/env/rollout.h"
#include "demoforge/il/actor.h"

namespace demoforge::il {

void DaggerConfig::validate() const {
  if (rounds < 1) throw InvalidArgumentError("DAgger needs rounds >= 1");
  if (episodes_per_round < 1 || learner_max_steps < 1) {
    throw InvalidArgumentError("DAgger budgets must be positive");
  }
  expert.validate();
}

DaggerConfig default_dagger_config(double learner_jitter) {
  DaggerConfig c;
  c.expert = env::default_expert_config(c.expert_task.build.tube);
  c.learner_task.jitter = learner_jitter;
  return c;
}

std::vector<uint64_t> dagger_expert_seeds(const DaggerConfig& config,
                                          uint64_t seed) {
  std::vector<uint64_t> seeds;
  const uint64_t base = mix64(seed ^ 0x646167676572ULL);
  for (int k = 0; k < config.episodes_per_round; ++k) seeds.push_back(base + k);
  return seeds;
}

ExpertDataset dagger_expert_dataset(const DaggerConfig& config,
                                    uint64_t seed) {
  std::vector<env::Trajectory> trajs;
  for (uint64_t s : dagger_expert_seeds(config, seed)) {
    env::ExpertPolicy expert(config.expert);
    trajs.push_back(
        env::rollout(expert, config.expert_task, s, config.expert_task.max_steps));
  }
  return dataset_from_trajectories(trajs);
}

DaggerResult dagger_train(const DaggerConfig& config, uint64_t seed) {
  config.validate();
  DaggerResult out;
  const nn::GaussianPolicy init =
      make_policy(config.expert_task, config.hidden, seed, config.init_log_std);

  ExpertDataset data = dagger_expert_dataset(config, seed);
  out.fits.push_back(bc_train(data, init, config.bc, seed));
  out.datasets.push_back(data);
  out.rollout_lengths.emplace_back();

  int64_t next_id = config.episodes_per_round;
  const uint64_t learner_base = mix64(seed ^ 0x6c6561726e6572ULL);
  for (int round = 1; round < config.rounds; ++round) {
    const nn::GaussianPolicy& current = out.fits.back().policy;
    std::vector<size_t> lengths;
    for (int k = 0; k < config.episodes_per_round; ++k) {
      const uint64_t ep_seed =
          learner_base +
          static_cast<uint64_t>(round) * config.episodes_per_round + k;
      GaussianActor actor(current, GaussianActor::Mode::kMean);
      const env::Trajectory t = env::rollout(actor, config.learner_task, ep_seed,
                                             config.learner_max_steps);
      for (const auto& obs : t.observations) {
        const Vec3 a = env::expert_action(obs, config.expert);
        data.add(obs, {a.x, a.y, a.z}, next_id);
      }
      ++next_id;
      lengths.push_back(t.size());
    }
    out.rollout_lengths.push_back(std::move(lengths));
    out.fits.push_back(bc_train(data, init, config.bc, seed));
    out.datasets.push_back(data);
  }
  out.policy = out.fits.back().policy;
  return out;
}

}  // namespace demoforge::il
