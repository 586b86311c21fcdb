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

#include "demoforge/il/actor.h"

#include "demoforge/common/random.h"

namespace demoforge::il {

std::vector<double> default_obs_scale(const env::TaskConfig& config) {
  if (config.task == md::TaskId::kNanotube) {
    return {2.0, 2.0, 2.0, 0.5, 0.5, 0.5, 1.0, 1.0, 1.0};
  }
  std::vector<double> s(env::kAlanineObsDim, 1.0);
  for (int i = 6; i < env::kAlanineObsDim; ++i) s[i] = 0.5;
  return s;
}

nn::GaussianPolicy make_policy(const env::TaskConfig& config,
                               const std::vector<int>& hidden, uint64_t seed,
                               double init_log_std) {
  std::vector<int> sizes{config.obs_dim()};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(env::kActionDim);
  nn::GaussianPolicy p(sizes, seed, init_log_std);
  p.obs_scale() = default_obs_scale(config);
  p.set_action_scale(config.max_force);
  return p;
}

env::Decision GaussianActor::act(const env::Observation& obs, int t) {
  env::Decision d;
  std::vector<double> u;
  if (mode_ == Mode::kMean) {
    u = policy_.mean(obs);
    d.log_prob = policy_.log_prob(obs, u);
  } else {
    auto s = policy_.sample(obs, mix64(seed_ ^ 0x61637472ULL),
                            static_cast<uint64_t>(t));
    u = std::move(s.u);
    d.log_prob = s.log_prob;
  }
  const double scale = policy_.action_scale();
  d.action = {scale * u[0], scale * u[1], scale * u[2]};
  return d;
}

}  // namespace demoforge::il
