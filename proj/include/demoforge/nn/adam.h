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

#ifndef DEMOFORGE_NN_ADAM_H_
#define DEMOFORGE_NN_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

namespace demoforge::nn {

struct OptimState {
  std::vector<double> m;
  std::vector<double> v;
  int64_t step = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static OptimState adam(size_t n, double lr) {
    OptimState s;
    s.m.assign(n, 0.0);
    s.v.assign(n, 0.0);
    s.lr = lr;
    return s;
  }
};

// In-place Adam update with bias correction. Moments are sized on first
// use; DimensionError if the shapes disagree afterwards.
void adam_step(std::span<double> params, std::span<const double> grads,
               OptimState& state);

}  // namespace demoforge::nn

#endif  // DEMOFORGE_NN_ADAM_H_
