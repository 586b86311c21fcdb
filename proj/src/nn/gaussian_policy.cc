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

#include "demoforge/nn/gaussian_policy.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "demoforge/common/error.h"
#include "demoforge/common/random.h"

namespace demoforge::nn {
namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

}  // namespace

GaussianPolicy::GaussianPolicy(std::vector<int> sizes, uint64_t seed,
                               double init_log_std)
    : net_(std::move(sizes), seed) {
  log_std_.assign(net_.output_dim(),
                  std::clamp(init_log_std, kMinLogStd, kMaxLogStd));
  obs_scale_.assign(net_.input_dim(), 1.0);
}

void GaussianPolicy::set_log_std(std::vector<double> log_std) {
  if (static_cast<int>(log_std.size()) != action_dim()) {
    throw DimensionError("log_std length must equal the action dimension");
  }
  for (auto& l : log_std) l = std::clamp(l, kMinLogStd, kMaxLogStd);
  log_std_ = std::move(log_std);
}

std::vector<double> GaussianPolicy::params() const {
  std::vector<double> p(net_.params().begin(), net_.params().end());
  p.insert(p.end(), log_std_.begin(), log_std_.end());
  return p;
}

void GaussianPolicy::set_params(std::span<const double> p) {
  if (p.size() != param_count()) throw DimensionError("parameter count mismatch");
  auto net_p = net_.params();
  std::copy(p.begin(), p.begin() + net_p.size(), net_p.begin());
  for (size_t d = 0; d < log_std_.size(); ++d) {
    log_std_[d] = std::clamp(p[net_p.size() + d], kMinLogStd, kMaxLogStd);
  }
}

std::vector<double> GaussianPolicy::normalize(
    std::span<const double> obs) const {
  if (obs.size() != obs_scale_.size()) {
    throw DimensionError("observation length does not match the policy");
  }
  std::vector<double> x(obs.size());
  for (size_t i = 0; i < obs.size(); ++i) x[i] = obs[i] * obs_scale_[i];
  return x;
}

std::vector<double> GaussianPolicy::mean(std::span<const double> obs) const {
  return net_.forward(normalize(obs));
}

double GaussianPolicy::log_prob(std::span<const double> obs,
                                std::span<const double> u) const {
  return gaussian_log_density(u, mean(obs), log_std_);
}

double GaussianPolicy::log_prob_grad(std::span<const double> obs,
                                     std::span<const double> u, double weight,
                                     std::span<double> grad) const {
  if (static_cast<int>(u.size()) != action_dim() ||
      grad.size() != param_count()) {
    throw DimensionError("log_prob_grad shape mismatch");
  }
  Mlp::Tape tape;
  const auto mu = net_.forward(normalize(obs), tape);
  std::vector<double> dmu(mu.size());
  double lp = 0.0;
  const size_t base = net_.param_count();
  for (size_t d = 0; d < mu.size(); ++d) {
    const double inv_var = std::exp(-2.0 * log_std_[d]);
    const double diff = u[d] - mu[d];
    lp += -0.5 * diff * diff * inv_var - log_std_[d] - kHalfLog2Pi;
    dmu[d] = weight * diff * inv_var;
    grad[base + d] += weight * (diff * diff * inv_var - 1.0);
  }
  net_.backward(tape, dmu, grad.subspan(0, base));
  return lp;
}

GaussianPolicy::Sample GaussianPolicy::sample(std::span<const double> obs,
                                              uint64_t seed, uint64_t t) const {
  Sample s;
  s.u = mean(obs);
  for (size_t d = 0; d < s.u.size(); ++d) {
    s.u[d] += std::exp(log_std_[d]) * CounterRng::normal(seed, t, d);
  }
  s.log_prob = log_prob(obs, s.u);
  return s;
}

double GaussianPolicy::entropy() const {
  double h = 0.0;
  for (double l : log_std_) h += 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e) + l;
  return h;
}

double gaussian_log_density(std::span<const double> x,
                            std::span<const double> mean,
                            std::span<const double> log_std) {
  double lp = 0.0;
  for (size_t d = 0; d < x.size(); ++d) {
    const double sigma = std::exp(log_std[d]);
    const double z = (x[d] - mean[d]) / sigma;
    lp += std::log(1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi))) -
          0.5 * z * z;
  }
  return lp;
}

}  // namespace demoforge::nn
