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

#ifndef DEMOFORGE_ENV_POLICY_H_
#define DEMOFORGE_ENV_POLICY_H_

#include <cstdint>
#include <functional>

#include "demoforge/common/vec3.h"
#include "demoforge/env/expert.h"
#include "demoforge/env/task_env.h"

namespace demoforge::env {

struct Decision {
  Vec3 action;
  double log_prob = 0.0;  // log density of `action`; 0 for deterministic
};

// Anything that maps observations to actions during a rollout. Stochastic
// policies must draw their noise from (episode seed, t) so that a rollout
// is a pure function of the policy and the seed.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual void begin_episode(uint64_t seed) { (void)seed; }
  virtual Decision act(const Observation& obs, int t) = 0;
};

class ExpertPolicy : public Policy {
 public:
  // Throws InvalidArgumentError for an invalid config.
  explicit ExpertPolicy(ScriptedExpertConfig config);
  Decision act(const Observation& obs, int) override {
    return {expert_action(obs, config_), 0.0};
  }

 private:
  ScriptedExpertConfig config_;
};

// Each component uniform in [-max_force, max_force].
class RandomPolicy : public Policy {
 public:
  explicit RandomPolicy(double max_force) : max_force_(max_force) {}
  void begin_episode(uint64_t seed) override { seed_ = seed; }
  Decision act(const Observation& obs, int t) override;

 private:
  double max_force_;
  uint64_t seed_ = 0;
};

class LambdaPolicy : public Policy {
 public:
  using Fn = std::function<Decision(const Observation&, int)>;
  explicit LambdaPolicy(Fn fn) : fn_(std::move(fn)) {}
  Decision act(const Observation& obs, int t) override { return fn_(obs, t); }

 private:
  Fn fn_;
};

}  // namespace demoforge::env

#endif  // DEMOFORGE_ENV_POLICY_H_
