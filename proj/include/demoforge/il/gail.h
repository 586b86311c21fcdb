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

#ifndef DEMOFORGE_IL_GAIL_H_
#define DEMOFORGE_IL_GAIL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "demoforge/env/expert.h"
#include "demoforge/env/rollout.h"
#include "demoforge/env/task_env.h"
#include "demoforge/il/dataset.h"
#include "demoforge/nn/adam.h"
#include "demoforge/nn/gaussian_policy.h"
#include "demoforge/nn/loss.h"
#include "demoforge/nn/mlp.h"

namespace demoforge::il {

// Orientation used throughout: D(s, a) -> 1 on policy pairs and -> 0 on
// expert pairs. The discriminator ascends
//   E_policy[ln D] + E_expert[ln(1 - D)]
// and the policy pays cost ln D.
inline constexpr double kMaxLogit = 30.0;

struct Discriminator {
  nn::Mlp net;  // (obs_dim + 3) -> ... -> 1 logit
  std::vector<double> obs_scale;
  double action_scale = 1.0;
  nn::OptimState opt;

  std::vector<double> input(std::span<const double> obs,
                            std::span<const double> action) const;
  // Logit clamped to +-kMaxLogit.
  double logit(std::span<const double> obs,
               std::span<const double> action) const;
  // Strictly inside (0, 1).
  double prob(std::span<const double> obs,
              std::span<const double> action) const;
};

Discriminator make_discriminator(const env::TaskConfig& config,
                                 const std::vector<int>& hidden,
                                 uint64_t seed);

// Raw (obs, action) pairs.
struct PairBatch {
  nn::Batch obs;
  nn::Batch actions;
  size_t size() const { return obs.size(); }
};

PairBatch pairs_from_dataset(const ExpertDataset& data);
// Actions are clamped to `max_force` so both sides of the discriminator see
// forces from the same range.
PairBatch pairs_from_trajectories(std::span<const env::Trajectory> trajs,
                                  double max_force);

// Negated objective: -(mean_policy ln D + mean_expert ln(1 - D)) and its
// gradient over the network parameters.
nn::LossGrad discriminator_loss(const Discriminator& disc,
                                const PairBatch& expert,
                                const PairBatch& policy);

// Mean of (D > 0.5) on policy pairs and (D < 0.5) on expert pairs, each
// group weighted equally; D == 0.5 counts as half.
double discriminator_accuracy(const Discriminator& disc,
                              const PairBatch& expert,
                              const PairBatch& policy);

struct DiscriminatorUpdate {
  double accuracy = 0.0;  // on the held-out 20% of each batch
  double loss = 0.0;      // training loss after the last step
};

// `steps` full-batch Adam steps on a seeded 80% split of each batch.
DiscriminatorUpdate discriminator_update(Discriminator& disc,
                                         const PairBatch& expert,
                                         const PairBatch& policy, int steps,
                                         double lr, uint64_t seed);

// One sample of the clipped surrogate.
struct SurrogateSample {
  std::vector<double> obs;
  std::vector<double> u;  // normalised action
  double old_log_prob = 0.0;
  double advantage = 0.0;
};

// Mean over samples of min(r A, clip(r, 1-eps, 1+eps) A), r = pi/pi_old.
double surrogate_objective(const nn::GaussianPolicy& policy,
                           std::span<const SurrogateSample> samples,
                           double clip);
// Unclipped mean of r A.
double surrogate_unclipped(const nn::GaussianPolicy& policy,
                           std::span<const SurrogateSample> samples);
// Negated clipped surrogate and its gradient over policy parameters.
nn::LossGrad surrogate_loss(const nn::GaussianPolicy& policy,
                            std::span<const SurrogateSample> samples,
                            double clip);

// Discounted returns minus the batch mean of the returns at the same time
// index, then normalised to unit variance (left as is when the spread is
// zero). One vector per trajectory.
std::vector<std::vector<double>> compute_advantages(
    const std::vector<std::vector<double>>& rewards, double gamma);

struct PolicyGradientConfig {
  double lambda = 1e-3;  // entropy coefficient
  double clip = 0.2;
  double gamma = 0.99;
  int epochs = 5;
  int minibatch = 256;
  double lr = 3e-4;
};

struct PolicyGradientStats {
  double mean_reward = 0.0;
  double surrogate_before = 0.0;
  double surrogate_after = 0.0;
  size_t samples = 0;
};

// Reward per step: -cost + lambda * (-log_prob). Trajectories need costs
// (ln D) and the log-probs recorded while sampling; InvalidArgumentError
// otherwise.
PolicyGradientStats policy_gradient_step(
    nn::GaussianPolicy& policy, nn::OptimState& opt,
    std::span<const env::Trajectory> trajectories,
    const PolicyGradientConfig& config, uint64_t seed);

struct GailConfig {
  int iterations = 300;
  int episodes_per_iteration = 16;
  // Training rollouts last exactly this many control steps.
  int horizon = 100;
  int discriminator_steps = 5;
  double discriminator_lr = 3e-4;
  std::vector<int> discriminator_hidden{64, 64};
  std::vector<int> policy_hidden{64, 64};
  double init_log_std = -1.0;
  PolicyGradientConfig pg{.epochs = 10, .lr = 1e-3};

  void validate() const;
};

struct GailIteration {
  double discriminator_accuracy = 0.0;
  double mean_cost = 0.0;
  double success_rate = 0.0;   // among this iteration's rollouts
  double occupancy_gap = 0.0;  // against the expert data
  double entropy = 0.0;
};

struct GailResult {
  nn::GaussianPolicy policy;
  Discriminator discriminator;
  std::vector<GailIteration> history;
};

// Alternates rollout sampling, discriminator_update and
// policy_gradient_step. `task` sets the physics; rollouts run for
// cfg.horizon steps without stopping at success.
GailResult gail_train(const env::TaskConfig& task, const ExpertDataset& expert,
                      const GailConfig& config, uint64_t seed);

// Expert pairs collected the way GAIL samples its own rollouts: `episodes`
// runs of exactly `horizon` steps, seeds first_seed, first_seed + 1, ...
ExpertDataset fixed_horizon_demos(const env::TaskConfig& task,
                                  const env::ScriptedExpertConfig& expert,
                                  int episodes, int horizon,
                                  uint64_t first_seed);

}  // namespace demoforge::il

#endif  // DEMOFORGE_IL_GAIL_H_
