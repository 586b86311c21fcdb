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

#include "demoforge/nn/mlp.h"

#include <cmath>
#include <string>

#include "demoforge/common/error.h"
#include "demoforge/common/random.h"

namespace demoforge::nn {

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw DimensionError("an Mlp needs at least 2 layers");
  size_t total = 0;
  for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] <= 0 || sizes_[l + 1] <= 0) {
      throw DimensionError("layer sizes must be positive");
    }
    offsets_.push_back(total);
    total += static_cast<size_t>(sizes_[l + 1]) * (sizes_[l] + 1);
  }
  params_.assign(total, 0.0);
}

Mlp::Mlp(std::vector<int> sizes, uint64_t seed) : Mlp(std::move(sizes)) {
  Rng rng(mix64(seed ^ 0x6d6c70ULL));
  for (int l = 0; l < layer_count(); ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double limit = std::sqrt(6.0 / (in + out));
    double* w = params_.data() + weight_offset(l);
    for (int k = 0; k < in * out; ++k) w[k] = rng.uniform(-limit, limit);
  }
}

Mlp Mlp::zeros(std::vector<int> sizes) { return Mlp(std::move(sizes)); }

std::vector<double> Mlp::forward(std::span<const double> input) const {
  Tape tape;
  return forward(input, tape);
}

std::vector<double> Mlp::forward(std::span<const double> input,
                                 Tape& tape) const {
  if (static_cast<int>(input.size()) != input_dim()) {
    throw DimensionError("Mlp input has length " + std::to_string(input.size()) +
                         ", expected " + std::to_string(input_dim()));
  }
  tape.acts.resize(sizes_.size());
  tape.acts[0].assign(input.begin(), input.end());
  for (int l = 0; l < layer_count(); ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    const auto& x = tape.acts[l];
    auto& y = tape.acts[l + 1];
    y.assign(out, 0.0);
    const bool hidden = l + 1 < layer_count();
    for (int o = 0; o < out; ++o) {
      double s = b[o];
      const double* row = w + static_cast<size_t>(o) * in;
      for (int i = 0; i < in; ++i) s += row[i] * x[i];
      y[o] = hidden ? std::tanh(s) : s;
    }
  }
  return tape.acts.back();
}

std::vector<double> Mlp::backward(const Tape& tape, std::span<const double> dout,
                                  std::span<double> grad) const {
  if (static_cast<int>(dout.size()) != output_dim() ||
      grad.size() != params_.size()) {
    throw DimensionError("backward: gradient buffer shape mismatch");
  }
  std::vector<double> delta(dout.begin(), dout.end());
  for (int l = layer_count() - 1; l >= 0; --l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    if (l + 1 < layer_count()) {
      const auto& y = tape.acts[l + 1];
      for (int o = 0; o < out; ++o) delta[o] *= 1.0 - y[o] * y[o];
    }
    const double* w = params_.data() + weight_offset(l);
    double* gw = grad.data() + weight_offset(l);
    double* gb = grad.data() + bias_offset(l);
    const auto& x = tape.acts[l];
    std::vector<double> prev(in, 0.0);
    for (int o = 0; o < out; ++o) {
      const double d = delta[o];
      gb[o] += d;
      const double* row = w + static_cast<size_t>(o) * in;
      double* grow = gw + static_cast<size_t>(o) * in;
      for (int i = 0; i < in; ++i) {
        grow[i] += d * x[i];
        prev[i] += d * row[i];
      }
    }
    delta = std::move(prev);
  }
  return delta;
}

bool Mlp::all_finite() const {
  for (double p : params_) {
    if (!std::isfinite(p)) return false;
  }
  return true;
}

}  // namespace demoforge::nn
