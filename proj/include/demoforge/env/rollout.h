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

#ifndef DEMOFORGE_ENV_ROLLOUT_H_
#define DEMOFORGE_ENV_ROLLOUT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "demoforge/env/policy.h"
#include "demoforge/env/task_env.h"
#include "demoforge/recording/recording.h"

namespace demoforge::env {

struct Trajectory {
  std::string task_id;
  uint64_t seed = 0;
  std::vector<Observation> observations;  // observation before each action
  std::vector<Vec3> actions;              // as returned by the policy
  std::vector<Vec3> applied;              // world frame, clamped
  std::vector<double> log_probs;
  std::vector<double> costs;  // filled by training code, may stay empty
  // Tube-frame methane COM at every observation plus the final state.
  std::vector<Vec3> com_path;
  Observation final_observation;
  bool terminal = false;
  bool success = false;

  size_t size() const { return actions.size(); }
};

// Control-step wall clock used when rollouts are written to a recording.
inline constexpr int64_t kRolloutTickMs = 33;

// Runs one episode of at most `max_steps` control steps. With `rec` set, the
// episode is appended to it: one frame per control step (user_forces hold
// the applied action), an `episode/start` and `episode/end` event and one
// `agent/step` event per action. Steps and wall times continue from what
// the recording already holds, so many episodes can share one recording.
Trajectory rollout(Policy& policy, const TaskConfig& config, uint64_t seed,
                   int max_steps, recording::Recording* rec = nullptr);

// Header for a recording of `config` rollouts.
recording::RecordingHeader rollout_header(const TaskConfig& config,
                                          uint64_t seed);

}  // namespace demoforge::env

#endif  // DEMOFORGE_ENV_ROLLOUT_H_
