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

#ifndef DEMOFORGE_IL_BC_H_
#define DEMOFORGE_IL_BC_H_

#include <cstdint>
#include <vector>

#include "demoforge/il/dataset.h"
#include "demoforge/nn/gaussian_policy.h"
#include "demoforge/nn/loss.h"

namespace demoforge::il {

struct BcConfig {
  nn::LossKind loss = nn::LossKind::kMse;
  int epochs = 200;
  int batch_size = 64;
  double lr = 1e-3;
  double val_fraction = 0.1;
};

struct BcResult {
  nn::GaussianPolicy policy;
  std::vector<double> train_losses;       // per epoch, after the update
  std::vector<double> validation_losses;  // empty when no validation split
  double initial_train_loss = 0.0;
};

// Minibatch Adam on the training split (by trajectory id). Targets are the
// dataset actions divided by the policy's action_scale. Deterministic in
// (data, policy, config, seed).
BcResult bc_train(const ExpertDataset& data, nn::GaussianPolicy policy,
                  const BcConfig& config, uint64_t seed);

// Normalised targets for `rows`.
nn::Batch normalized_actions(const ExpertDataset& data,
                             const nn::GaussianPolicy& policy);

}  // namespace demoforge::il

#endif  // DEMOFORGE_IL_BC_H_
