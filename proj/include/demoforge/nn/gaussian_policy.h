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

#ifndef DEMOFORGE_NN_GAUSSIAN_POLICY_H_
#define DEMOFORGE_NN_GAUSSIAN_POLICY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "demoforge/nn/mlp.h"

namespace demoforge::nn {

// Diagonal Gaussian over a normalised action u; the environment receives
// action_scale * u. Observations are multiplied elementwise by obs_scale
// before entering the mean network. The log-std vector does not depend on
// the observation.
class GaussianPolicy {
 public:
  static constexpr double kMinLogStd = -5.0;
  static constexpr double kMaxLogStd = 2.0;

  GaussianPolicy() = default;
  GaussianPolicy(std::vector<int> sizes, uint64_t seed,
                 double init_log_std = -1.0);

  int obs_dim() const { return net_.input_dim(); }
  int action_dim() const { return net_.output_dim(); }

  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }
  const std::vector<double>& log_std() const { return log_std_; }
  void set_log_std(std::vector<double> log_std);

  std::vector<double>& obs_scale() { return obs_scale_; }
  const std::vector<double>& obs_scale() const { return obs_scale_; }
  double action_scale() const { return action_scale_; }
  void set_action_scale(double s) { action_scale_ = s; }

  // Flat parameters: network parameters followed by log_std.
  size_t param_count() const { return net_.param_count() + log_std_.size(); }
  std::vector<double> params() const;
  // Copies `p` in and clamps log_std into [kMinLogStd, kMaxLogStd].
  void set_params(std::span<const double> p);

  std::vector<double> normalize(std::span<const double> obs) const;
  // Mean of u.
  std::vector<double> mean(std::span<const double> obs) const;

  double log_prob(std::span<const double> obs, std::span<const double> u) const;
  // Returns log pi(u|obs) and adds weight * d(log pi)/d(params) to `grad`.
  double log_prob_grad(std::span<const double> obs, std::span<const double> u,
                       double weight, std::span<double> grad) const;

  struct Sample {
    std::vector<double> u;
    double log_prob = 0.0;
  };
  // u = mean + std * xi with xi drawn from the key (seed, t).
  Sample sample(std::span<const double> obs, uint64_t seed, uint64_t t) const;

  // Sum over action dimensions of 0.5*ln(2*pi*e) + log_std.
  double entropy() const;

  friend bool operator==(const GaussianPolicy&,
                         const GaussianPolicy&) = default;

 private:
  Mlp net_;
  std::vector<double> log_std_;
  std::vector<double> obs_scale_;
  double action_scale_ = 1.0;
};

// Independent closed form of the diagonal Gaussian log density.
double gaussian_log_density(std::span<const double> x,
                            std::span<const double> mean,
                            std::span<const double> log_std);

}  // namespace demoforge::nn

#endif  // DEMOFORGE_NN_GAUSSIAN_POLICY_H_
