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

#ifndef DEMOFORGE_NN_LOSS_H_
#define DEMOFORGE_NN_LOSS_H_

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "demoforge/nn/gaussian_policy.h"
#include "demoforge/nn/mlp.h"

namespace demoforge::nn {

enum class LossKind { kMse, kNll };

// Accepts "mse" and "nll".
LossKind parse_loss_kind(std::string_view name);

struct LossGrad {
  double loss = 0.0;          // batch mean
  std::vector<double> grad;   // d(loss)/d(params)
};

using Batch = std::vector<std::vector<double>>;

// Per-sample scalar loss of a network output. Writes dL/doutput into `dout`
// and returns L.
using SampleLoss =
    std::function<double(size_t index, std::span<const double> output,
                         std::span<double> dout)>;

// Batch-mean of an arbitrary per-sample loss. A non-finite sample loss
// raises NumericError carrying the sample index.
LossGrad custom_loss(const Mlp& net, const Batch& inputs,
                     const SampleLoss& loss);

// Batch-mean of ||net(x) - y||^2.
LossGrad mse_loss(const Mlp& net, const Batch& inputs, const Batch& targets);

// Over policy parameters (network then log_std); inputs are raw
// observations, targets normalised actions.
// MSE: ||mean(s) - u*||^2, log_std gradient zero.
LossGrad policy_mse_loss(const GaussianPolicy& policy, const Batch& obs,
                         const Batch& actions);
// NLL: -ln pi(u*|s).
LossGrad gaussian_nll_loss(const GaussianPolicy& policy, const Batch& obs,
                           const Batch& actions);

LossGrad policy_loss(LossKind kind, const GaussianPolicy& policy,
                     const Batch& obs, const Batch& actions);

}  // namespace demoforge::nn

#endif  // DEMOFORGE_NN_LOSS_H_
