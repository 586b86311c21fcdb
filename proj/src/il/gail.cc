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

#include "demoforge/il/gail.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "demoforge/common/error.h"
#include "demoforge/common/random.h"
#include "demoforge/il/actor.h"
#include "demoforge/il/discretize.h"
#include "demoforge/md/forcefield.h"

namespace demoforge::il {
namespace {

// ln(sigmoid(z)) and ln(1 - sigmoid(z)) without overflow.
double log_sigmoid(double z) {
  return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}
double log_one_minus_sigmoid(double z) { return log_sigmoid(-z); }
double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void shuffle(std::vector<size_t>& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

PairBatch take(const PairBatch& b, std::span<const size_t> rows) {
  PairBatch out;
  for (size_t r : rows) {
    out.obs.push_back(b.obs[r]);
    out.actions.push_back(b.actions[r]);
  }
  return out;
}

}  // namespace

std::vector<double> Discriminator::input(std::span<const double> obs,
                                         std::span<const double> action) const {
  if (obs.size() != obs_scale.size() || action.size() != 3) {
    throw DimensionError("discriminator input has the wrong shape");
  }
  std::vector<double> x;
  x.reserve(obs.size() + 3);
  for (size_t i = 0; i < obs.size(); ++i) x.push_back(obs[i] * obs_scale[i]);
  for (double a : action) x.push_back(a / action_scale);
  return x;
}

double Discriminator::logit(std::span<const double> obs,
                            std::span<const double> action) const {
  const double z = net.forward(input(obs, action))[0];
  if (!std::isfinite(z)) throw NumericError("non-finite discriminator logit", -1);
  return std::clamp(z, -kMaxLogit, kMaxLogit);
}

double Discriminator::prob(std::span<const double> obs,
                           std::span<const double> action) const {
  return sigmoid(logit(obs, action));
}

Discriminator make_discriminator(const env::TaskConfig& config,
                                 const std::vector<int>& hidden,
                                 uint64_t seed) {
  Discriminator d;
  std::vector<int> sizes{config.obs_dim() + env::kActionDim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  d.net = nn::Mlp(sizes, seed);
  d.obs_scale = default_obs_scale(config);
  d.action_scale = config.max_force;
  return d;
}

PairBatch pairs_from_dataset(const ExpertDataset& data) {
  PairBatch b;
  b.obs = data.observations;
  b.actions = data.actions;
  return b;
}

PairBatch pairs_from_trajectories(std::span<const env::Trajectory> trajs,
                                  double max_force) {
  PairBatch b;
  for (const auto& t : trajs) {
    for (size_t i = 0; i < t.size(); ++i) {
      const Vec3 a = md::clamp_magnitude(t.actions[i], max_force);
      b.obs.push_back(t.observations[i]);
      b.actions.push_back({a.x, a.y, a.z});
    }
  }
  return b;
}

nn::LossGrad discriminator_loss(const Discriminator& disc,
                                const PairBatch& expert,
                                const PairBatch& policy) {
  if (expert.size() == 0 || policy.size() == 0) {
    throw InvalidArgumentError("discriminator needs both batches");
  }
  nn::LossGrad out;
  out.grad.assign(disc.net.param_count(), 0.0);
  nn::Mlp::Tape tape;
  auto accumulate = [&](const PairBatch& b, bool is_policy) {
    const double w = 1.0 / static_cast<double>(b.size());
    for (size_t i = 0; i < b.size(); ++i) {
      const double raw = disc.net.forward(disc.input(b.obs[i], b.actions[i]),
                                          tape)[0];
      if (!std::isfinite(raw)) {
        throw NumericError("non-finite discriminator logit",
                           static_cast<int64_t>(i));
      }
      const double z = std::clamp(raw, -kMaxLogit, kMaxLogit);
      const bool clamped = raw != z;
      double dz;
      if (is_policy) {
        out.loss -= w * log_sigmoid(z);
        dz = -w * (1.0 - sigmoid(z));
      } else {
        out.loss -= w * log_one_minus_sigmoid(z);
        dz = w * sigmoid(z);
      }
      if (clamped) dz = 0.0;
      const double dout[1] = {dz};
      disc.net.backward(tape, dout, out.grad);
    }
  };
  accumulate(policy, true);
  accumulate(expert, false);
  return out;
}

double discriminator_accuracy(const Discriminator& disc,
                              const PairBatch& expert,
                              const PairBatch& policy) {
  auto score = [&](const PairBatch& b, bool is_policy) {
    if (b.size() == 0) return 0.0;
    double hits = 0.0;
    for (size_t i = 0; i < b.size(); ++i) {
      const double z = disc.logit(b.obs[i], b.actions[i]);
      if (z == 0.0) hits += 0.5;
      else if ((z > 0.0) == is_policy) hits += 1.0;
    }
    return hits / static_cast<double>(b.size());
  };
  return 0.5 * (score(policy, true) + score(expert, false));
}

DiscriminatorUpdate discriminator_update(Discriminator& disc,
                                         const PairBatch& expert,
                                         const PairBatch& policy, int steps,
                                         double lr, uint64_t seed) {
  if (expert.size() < 2 || policy.size() < 2) {
    throw InvalidArgumentError("discriminator batches need at least 2 pairs");
  }
  auto split = [&](const PairBatch& b, PairBatch& train, PairBatch& held) {
    std::vector<size_t> idx(b.size());
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(mix64(seed ^ (0x64697363ULL + b.size())));
    shuffle(idx, rng);
    const size_t n_held = std::max<size_t>(1, b.size() / 5);
    held = take(b, std::span(idx).subspan(0, n_held));
    train = take(b, std::span(idx).subspan(n_held));
  };
  PairBatch e_train, e_held, p_train, p_held;
  split(expert, e_train, e_held);
  split(policy, p_train, p_held);
  if (disc.opt.m.empty()) disc.opt = nn::OptimState::adam(disc.net.param_count(), lr);
  disc.opt.lr = lr;
  DiscriminatorUpdate out;
  for (int s = 0; s < steps; ++s) {
    const auto g = discriminator_loss(disc, e_train, p_train);
    nn::adam_step(disc.net.params(), g.grad, disc.opt);
  }
  out.loss = discriminator_loss(disc, e_train, p_train).loss;
  out.accuracy = discriminator_accuracy(disc, e_held, p_held);
  return out;
}

double surrogate_objective(const nn::GaussianPolicy& policy,
                           std::span<const SurrogateSample> samples,
                           double clip) {
  double total = 0.0;
  for (const auto& s : samples) {
    const double r = std::exp(policy.log_prob(s.obs, s.u) - s.old_log_prob);
    const double rc = std::clamp(r, 1.0 - clip, 1.0 + clip);
    total += std::min(r * s.advantage, rc * s.advantage);
  }
  return total / static_cast<double>(samples.size());
}

double surrogate_unclipped(const nn::GaussianPolicy& policy,
                           std::span<const SurrogateSample> samples) {
  double total = 0.0;
  for (const auto& s : samples) {
    total += std::exp(policy.log_prob(s.obs, s.u) - s.old_log_prob) *
             s.advantage;
  }
  return total / static_cast<double>(samples.size());
}

nn::LossGrad surrogate_loss(const nn::GaussianPolicy& policy,
                            std::span<const SurrogateSample> samples,
                            double clip) {
  if (samples.empty()) throw InvalidArgumentError("empty surrogate batch");
  nn::LossGrad out;
  out.grad.assign(policy.param_count(), 0.0);
  const double w = 1.0 / static_cast<double>(samples.size());
  std::vector<double> scratch(policy.param_count());
  for (const auto& s : samples) {
    const double lp = policy.log_prob(s.obs, s.u);
    const double r = std::exp(lp - s.old_log_prob);
    const double a = s.advantage;
    const double rc = std::clamp(r, 1.0 - clip, 1.0 + clip);
    out.loss -= w * std::min(r * a, rc * a);
    const bool active = a >= 0.0 ? r < 1.0 + clip : r > 1.0 - clip;
    if (active && a != 0.0) {
      policy.log_prob_grad(s.obs, s.u, -w * a * r, out.grad);
    }
  }
  return out;
}

std::vector<std::vector<double>> compute_advantages(
    const std::vector<std::vector<double>>& rewards, double gamma) {
  std::vector<std::vector<double>> returns(rewards.size());
  size_t horizon = 0;
  for (size_t k = 0; k < rewards.size(); ++k) {
    const auto& r = rewards[k];
    auto& g = returns[k];
    g.assign(r.size(), 0.0);
    double acc = 0.0;
    for (size_t t = r.size(); t-- > 0;) {
      acc = r[t] + gamma * acc;
      g[t] = acc;
    }
    horizon = std::max(horizon, r.size());
  }
  std::vector<double> baseline(horizon, 0.0), count(horizon, 0.0);
  for (const auto& g : returns) {
    for (size_t t = 0; t < g.size(); ++t) {
      baseline[t] += g[t];
      count[t] += 1.0;
    }
  }
  for (size_t t = 0; t < horizon; ++t) baseline[t] /= count[t];
  double sum = 0.0, sum_sq = 0.0, n = 0.0;
  for (auto& g : returns) {
    for (size_t t = 0; t < g.size(); ++t) {
      g[t] -= baseline[t];
      sum += g[t];
      sum_sq += g[t] * g[t];
      n += 1.0;
    }
  }
  if (n == 0.0) return returns;
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  if (std::sqrt(var) > 1e-12) {
    const double inv = 1.0 / std::sqrt(var);
    for (auto& g : returns) {
      for (auto& x : g) x = (x - mean) * inv;
    }
  }
  return returns;
}

PolicyGradientStats policy_gradient_step(
    nn::GaussianPolicy& policy, nn::OptimState& opt,
    std::span<const env::Trajectory> trajectories,
    const PolicyGradientConfig& config, uint64_t seed) {
  if (trajectories.empty()) throw InvalidArgumentError("no trajectories");
  std::vector<std::vector<double>> rewards;
  PolicyGradientStats stats;
  double reward_sum = 0.0;
  for (const auto& t : trajectories) {
    if (t.log_probs.size() != t.size()) {
      throw InvalidArgumentError("trajectory is missing sampling log-probs");
    }
    if (t.costs.size() != t.size()) {
      throw InvalidArgumentError("trajectory is missing per-step costs");
    }
    std::vector<double> r(t.size());
    for (size_t i = 0; i < t.size(); ++i) {
      r[i] = -t.costs[i] - config.lambda * t.log_probs[i];
      reward_sum += r[i];
    }
    rewards.push_back(std::move(r));
  }
  const auto adv = compute_advantages(rewards, config.gamma);
  std::vector<SurrogateSample> samples;
  const double inv_scale = 1.0 / policy.action_scale();
  for (size_t k = 0; k < trajectories.size(); ++k) {
    const auto& t = trajectories[k];
    for (size_t i = 0; i < t.size(); ++i) {
      const Vec3& a = t.actions[i];
      samples.push_back({t.observations[i],
                         {a.x * inv_scale, a.y * inv_scale, a.z * inv_scale},
                         t.log_probs[i],
                         adv[k][i]});
    }
  }
  stats.samples = samples.size();
  stats.mean_reward = reward_sum / static_cast<double>(samples.size());
  stats.surrogate_before = surrogate_objective(policy, samples, config.clip);

  if (opt.m.empty()) opt = nn::OptimState::adam(policy.param_count(), config.lr);
  opt.lr = config.lr;
  Rng rng(mix64(seed ^ 0x70706fULL));
  std::vector<size_t> order(samples.size());
  std::vector<SurrogateSample> mb;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    shuffle(order, rng);
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(config.minibatch)) {
      const size_t end = std::min(order.size(),
                                  start + static_cast<size_t>(config.minibatch));
      mb.clear();
      for (size_t i = start; i < end; ++i) mb.push_back(samples[order[i]]);
      const auto g = surrogate_loss(policy, mb, config.clip);
      auto p = policy.params();
      nn::adam_step(p, g.grad, opt);
      policy.set_params(p);
    }
  }
  stats.surrogate_after = surrogate_objective(policy, samples, config.clip);
  return stats;
}

void GailConfig::validate() const {
  if (iterations <= 0 || episodes_per_iteration <= 0 || horizon <= 0 ||
      discriminator_steps <= 0 || pg.epochs <= 0 || pg.minibatch <= 0) {
    throw InvalidArgumentError("GAIL budgets must be positive");
  }
  if (pg.lambda < 0.0) throw InvalidArgumentError("lambda must be >= 0");
}

GailResult gail_train(const env::TaskConfig& task, const ExpertDataset& expert,
                      const GailConfig& config, uint64_t seed) {
  config.validate();
  if (expert.empty()) throw InvalidArgumentError("empty expert dataset");
  GailResult out;
  out.policy = make_policy(task, config.policy_hidden, seed, config.init_log_std);
  out.discriminator = make_discriminator(task, config.discriminator_hidden,
                                         mix64(seed ^ 0x64ULL));
  nn::OptimState opt = nn::OptimState::adam(out.policy.param_count(),
                                            config.pg.lr);
  const PairBatch expert_pairs = pairs_from_dataset(expert);

  env::TaskConfig train_task = task;
  train_task.terminate_on_success = false;
  train_task.max_steps = config.horizon;

  std::optional<Discretizer> grid;
  std::optional<OccupancyEstimate> expert_occ;
  if (task.task == md::TaskId::kNanotube) {
    env::TaskEnv probe(task);
    probe.reset(0);
    grid = default_discretizer(probe.frame(), 8, 3);
    expert_occ = occupancy_estimate(expert, *grid);
  }

  Rng rng(mix64(seed ^ 0x6761696cULL));
  const uint64_t episode_base = mix64(seed ^ 0x65706973ULL);
  for (int it = 0; it < config.iterations; ++it) {
    std::vector<env::Trajectory> trajs;
    GailIteration diag;
    for (int k = 0; k < config.episodes_per_iteration; ++k) {
      GaussianActor actor(out.policy, GaussianActor::Mode::kSample);
      const uint64_t ep_seed =
          episode_base +
          static_cast<uint64_t>(it) * config.episodes_per_iteration + k;
      trajs.push_back(env::rollout(actor, train_task, ep_seed, config.horizon));
      diag.success_rate += trajs.back().success ? 1.0 : 0.0;
    }
    diag.success_rate /= config.episodes_per_iteration;

    const PairBatch policy_pairs =
        pairs_from_trajectories(trajs, task.max_force);
    std::vector<size_t> pick(expert_pairs.size());
    std::iota(pick.begin(), pick.end(), 0);
    shuffle(pick, rng);
    pick.resize(std::min(pick.size(), policy_pairs.size()));
    const PairBatch expert_batch = take(expert_pairs, pick);

    const auto upd = discriminator_update(
        out.discriminator, expert_batch, policy_pairs,
        config.discriminator_steps, config.discriminator_lr,
        mix64(seed + static_cast<uint64_t>(it)));
    diag.discriminator_accuracy = upd.accuracy;

    size_t row = 0;
    double cost_sum = 0.0;
    for (auto& t : trajs) {
      t.costs.resize(t.size());
      for (size_t i = 0; i < t.size(); ++i, ++row) {
        t.costs[i] = log_sigmoid(out.discriminator.logit(
            policy_pairs.obs[row], policy_pairs.actions[row]));
        cost_sum += t.costs[i];
      }
    }
    diag.mean_cost = cost_sum / static_cast<double>(row);
    policy_gradient_step(out.policy, opt, trajs, config.pg,
                         mix64(seed ^ (0x7067ULL + static_cast<uint64_t>(it))));
    diag.entropy = out.policy.entropy();
    if (grid) {
      diag.occupancy_gap =
          occupancy_gap(occupancy_estimate(trajs, *grid), *expert_occ);
    }
    out.history.push_back(diag);
  }
  return out;
}

ExpertDataset fixed_horizon_demos(const env::TaskConfig& task,
                                  const env::ScriptedExpertConfig& expert,
                                  int episodes, int horizon,
                                  uint64_t first_seed) {
  env::TaskConfig cfg = task;
  cfg.terminate_on_success = false;
  std::vector<env::Trajectory> trajs;
  for (int k = 0; k < episodes; ++k) {
    env::ExpertPolicy policy(expert);
    trajs.push_back(env::rollout(policy, cfg, first_seed + k, horizon));
  }
  return dataset_from_trajectories(trajs);
}

}  // namespace demoforge::il
