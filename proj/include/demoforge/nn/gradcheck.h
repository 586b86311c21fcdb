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

#ifndef DEMOFORGE_NN_GRADCHECK_H_
#define DEMOFORGE_NN_GRADCHECK_H_

#include <functional>
#include <span>
#include <vector>

namespace demoforge::nn {

using ScalarFn = std::function<double(std::span<const double>)>;

// Central differences of `f` at `x` with step `h` in every coordinate.
std::vector<double> numerical_gradient(const ScalarFn& f,
                                       std::span<const double> x,
                                       double h = 1e-6);

// ||a - b|| / max(||a||, ||b||), or 0 when both are exactly zero.
double relative_error(std::span<const double> a, std::span<const double> b);

}  // namespace demoforge::nn

#endif  // DEMOFORGE_NN_GRADCHECK_H_
