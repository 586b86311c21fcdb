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

#include "demoforge/il/bc.h"

#include <algorithm>

#include "demoforge/common/error.h"
#include "demoforge/common/random.h"
#include "demoforge/nn/adam.h"

namespace demoforge::il {

nn::Batch normalized_actions(const ExpertDataset& data,
                             const nn::GaussianPolicy& policy) {
  nn::Batch out;
  out.reserve(data.size());
  const double inv = 1.0 / policy.action_scale();
  for (const auto& a : data.actions) {
    std::vector<double> u(a.size());
    for (size_t d = 0; d < a.size(); ++d) u[d] = a[d] * inv;
    out.push_back(std::move(u));
  }
  return out;
}

BcResult bc_train(const ExpertDataset& data, nn::GaussianPolicy policy,
                  const BcConfig& config, uint64_t seed) {
  if (data.empty()) throw InvalidArgumentError("empty expert dataset");
  if (data.obs_dim != policy.obs_dim() ||
      data.action_dim != policy.action_dim()) {
    throw DimensionError("dataset and policy dimensions differ");
  }
  if (config.epochs < 0 || config.batch_size < 1) {
    throw InvalidArgumentError("epochs must be >= 0 and batch_size >= 1");
  }
  const auto split = split_by_trajectory(data, config.val_fraction, seed);
  const nn::Batch targets = normalized_actions(data, policy);
  auto gather = [&](const std::vector<size_t>& rows, nn::Batch& obs,
                    nn::Batch& act) {
    obs.clear();
    act.clear();
    for (size_t r : rows) {
      obs.push_back(data.observations[r]);
      act.push_back(targets[r]);
    }
  };
  nn::Batch train_obs, train_act, val_obs, val_act;
  gather(split.train, train_obs, train_act);
  gather(split.validation, val_obs, val_act);

  BcResult result;
  result.initial_train_loss =
      nn::policy_loss(config.loss, policy, train_obs, train_act).loss;

  auto opt = nn::OptimState::adam(policy.param_count(), config.lr);
  Rng rng(mix64(seed ^ 0x6263ULL));
  std::vector<size_t> order(split.train.size());
  nn::Batch mb_obs, mb_act;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(config.batch_size)) {
      const size_t end =
          std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      mb_obs.clear();
      mb_act.clear();
      for (size_t k = start; k < end; ++k) {
        mb_obs.push_back(train_obs[order[k]]);
        mb_act.push_back(train_act[order[k]]);
      }
      const auto g = nn::policy_loss(config.loss, policy, mb_obs, mb_act);
      auto p = policy.params();
      nn::adam_step(p, g.grad, opt);
      policy.set_params(p);
    }
    result.train_losses.push_back(
        nn::policy_loss(config.loss, policy, train_obs, train_act).loss);
    if (!val_obs.empty()) {
      result.validation_losses.push_back(
          nn::policy_loss(config.loss, policy, val_obs, val_act).loss);
    }
  }
  result.policy = std::move(policy);
  return result;
}

}  // namespace demoforge::il
