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

#ifndef DEMOFORGE_NN_MLP_H_
#define DEMOFORGE_NN_MLP_H_

#include <cstdint>
#include <span>
#include <vector>

namespace demoforge::nn {

// Fully connected network, tanh on hidden layers, linear output.
//
// Parameters live in one flat vector. Layer l contributes its weight matrix
// (out x in, row-major) followed by its bias (out).
class Mlp {
 public:
  Mlp() = default;
  // Glorot-uniform weights from `seed`, zero biases.
  Mlp(std::vector<int> sizes, uint64_t seed);

  static Mlp zeros(std::vector<int> sizes);

  const std::vector<int>& sizes() const { return sizes_; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  int layer_count() const { return static_cast<int>(sizes_.size()) - 1; }

  size_t param_count() const { return params_.size(); }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  // Offsets of layer l's weights and bias inside params().
  size_t weight_offset(int layer) const { return offsets_[layer]; }
  size_t bias_offset(int layer) const {
    return offsets_[layer] + static_cast<size_t>(sizes_[layer + 1]) * sizes_[layer];
  }

  // Layer inputs kept for the backward pass. acts[0] is the network input,
  // acts[l] the output of layer l (post-activation).
  struct Tape {
    std::vector<std::vector<double>> acts;
  };

  // DimensionError on wrong input length.
  std::vector<double> forward(std::span<const double> input) const;
  std::vector<double> forward(std::span<const double> input, Tape& tape) const;

  // Adds dL/dparams into `grad` (length param_count()) given dL/doutput for
  // the sample recorded in `tape`; returns dL/dinput.
  std::vector<double> backward(const Tape& tape, std::span<const double> dout,
                               std::span<double> grad) const;

  bool all_finite() const;

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  explicit Mlp(std::vector<int> sizes);

  std::vector<int> sizes_;
  std::vector<size_t> offsets_;
  std::vector<double> params_;
};

}  // namespace demoforge::nn

#endif  // DEMOFORGE_NN_MLP_H_
