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

#include "demoforge/nn/loss.h"

#include <cmath>
#include <string>

#include "demoforge/common/error.h"

namespace demoforge::nn {
namespace {

void check_batch(const Batch& a, const Batch& b) {
  if (a.empty()) throw InvalidArgumentError("empty batch");
  if (a.size() != b.size()) throw DimensionError("batch sizes differ");
}

void check_finite(double loss, size_t index) {
  if (!std::isfinite(loss)) {
    throw NumericError("non-finite loss", static_cast<int64_t>(index));
  }
}

}  // namespace

LossKind parse_loss_kind(std::string_view name) {
  if (name == "mse") return LossKind::kMse;
  if (name == "nll") return LossKind::kNll;
  throw InvalidArgumentError("unknown loss '" + std::string(name) + "'");
}

LossGrad custom_loss(const Mlp& net, const Batch& inputs,
                     const SampleLoss& loss) {
  if (inputs.empty()) throw InvalidArgumentError("empty batch");
  LossGrad out;
  out.grad.assign(net.param_count(), 0.0);
  const double w = 1.0 / static_cast<double>(inputs.size());
  Mlp::Tape tape;
  std::vector<double> dout(net.output_dim());
  for (size_t i = 0; i < inputs.size(); ++i) {
    const auto y = net.forward(inputs[i], tape);
    std::fill(dout.begin(), dout.end(), 0.0);
    const double l = loss(i, y, dout);
    check_finite(l, i);
    out.loss += w * l;
    for (auto& d : dout) d *= w;
    net.backward(tape, dout, out.grad);
  }
  return out;
}

LossGrad mse_loss(const Mlp& net, const Batch& inputs, const Batch& targets) {
  check_batch(inputs, targets);
  return custom_loss(net, inputs,
                     [&](size_t i, std::span<const double> y,
                         std::span<double> dout) {
                       const auto& t = targets[i];
                       if (t.size() != y.size()) {
                         throw DimensionError("target length mismatch");
                       }
                       double l = 0.0;
                       for (size_t d = 0; d < y.size(); ++d) {
                         const double e = y[d] - t[d];
                         l += e * e;
                         dout[d] = 2.0 * e;
                       }
                       return l;
                     });
}

LossGrad policy_mse_loss(const GaussianPolicy& policy, const Batch& obs,
                         const Batch& actions) {
  check_batch(obs, actions);
  Batch inputs;
  inputs.reserve(obs.size());
  for (const auto& o : obs) inputs.push_back(policy.normalize(o));
  LossGrad g = mse_loss(policy.net(), inputs, actions);
  g.grad.resize(policy.param_count(), 0.0);
  return g;
}

LossGrad gaussian_nll_loss(const GaussianPolicy& policy, const Batch& obs,
                           const Batch& actions) {
  check_batch(obs, actions);
  LossGrad out;
  out.grad.assign(policy.param_count(), 0.0);
  const double w = 1.0 / static_cast<double>(obs.size());
  for (size_t i = 0; i < obs.size(); ++i) {
    const double lp = policy.log_prob_grad(obs[i], actions[i], -w, out.grad);
    check_finite(lp, i);
    out.loss -= w * lp;
  }
  return out;
}

LossGrad policy_loss(LossKind kind, const GaussianPolicy& policy,
                     const Batch& obs, const Batch& actions) {
  return kind == LossKind::kMse ? policy_mse_loss(policy, obs, actions)
                                : gaussian_nll_loss(policy, obs, actions);
}

}  // namespace demoforge::nn
