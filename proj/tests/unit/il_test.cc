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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "demoforge/common/error.h"
#include "demoforge/common/random.h"
#include "demoforge/env/expert.h"
#include "demoforge/env/rollout.h"
#include "demoforge/il/actor.h"
#include "demoforge/il/bc.h"
#include "demoforge/il/dagger.h"
#include "demoforge/il/dataset.h"
#include "demoforge/il/discretize.h"
#include "demoforge/il/gail.h"
#include "demoforge/il/mdp.h"
#include "demoforge/il/stats.h"
#include "demoforge/il/woc.h"
#include "demoforge/nn/gradcheck.h"

using namespace demoforge;
using namespace demoforge::il;

namespace {

ExpertDataset toy_dataset(int trajectories, int rows_each, uint64_t seed) {
  Rng rng(seed);
  ExpertDataset d;
  d.obs_dim = 2;
  for (int k = 0; k < trajectories; ++k) {
    for (int i = 0; i < rows_each; ++i) {
      const double a = rng.normal(), b = rng.normal();
      d.add({a, b}, {100 * a, -50 * b, 10.0}, k);
    }
  }
  return d;
}

PairBatch gaussian_pairs(Rng& rng, size_t n, double shift) {
  PairBatch b;
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> obs(env::kNanotubeObsDim);
    for (auto& x : obs) x = 0.3 * rng.normal() + shift;
    b.obs.push_back(obs);
    b.actions.push_back({200 * rng.normal() + 500 * shift, 200 * rng.normal(),
                         200 * rng.normal()});
  }
  return b;
}

std::vector<env::Trajectory> expert_trajectories(int count, uint64_t first) {
  env::TaskConfig cfg;
  env::ExpertPolicy expert(env::default_expert_config(cfg.build.tube));
  std::vector<env::Trajectory> out;
  for (int k = 0; k < count; ++k) {
    out.push_back(env::rollout(expert, cfg, first + k, cfg.max_steps));
  }
  return out;
}

}  // namespace

TEST_CASE("dataset rows must match the declared widths") {
  ExpertDataset d;
  d.obs_dim = 2;
  CHECK_THROWS_AS(d.add({1, 2, 3}, {0, 0, 0}, 0), DimensionError);
  CHECK_THROWS_AS(d.add({1, 2}, {0, 0}, 0), DimensionError);
  CHECK_THROWS_AS(parse_source_kind("robot"), InvalidArgumentError);
}

TEST_CASE("tensor files round-trip") {
  ExpertDataset d = toy_dataset(3, 4, 1);
  d.sources[5] = SourceKind::kHuman;
  CHECK(decode_tensor_file(encode_tensor_file(d)) == d);
  std::string bad = encode_tensor_file(d);
  bad.resize(bad.size() - 8);
  CHECK_THROWS_AS(decode_tensor_file(bad), Error);
}

TEST_CASE("split by trajectory keeps every trajectory on one side") {
  const ExpertDataset d = toy_dataset(10, 5, 2);
  const auto s = split_by_trajectory(d, 0.2, 9);
  CHECK(s.train.size() + s.validation.size() == d.size());
  std::set<int64_t> train_ids, val_ids;
  for (size_t r : s.train) train_ids.insert(d.trajectory_ids[r]);
  for (size_t r : s.validation) val_ids.insert(d.trajectory_ids[r]);
  CHECK(val_ids.size() == 2);
  for (int64_t id : val_ids) CHECK(train_ids.count(id) == 0);
  const auto again = split_by_trajectory(d, 0.2, 9);
  CHECK(again.validation == s.validation);
}

TEST_CASE("rollout recordings rebuild the same dataset") {
  env::TaskConfig cfg;
  env::ExpertPolicy expert(env::default_expert_config(cfg.build.tube));
  recording::Recording rec(env::rollout_header(cfg, 0));
  std::vector<env::Trajectory> trajs;
  for (uint64_t s = 0; s < 2; ++s) trajs.push_back(env::rollout(expert, cfg, s, cfg.max_steps, &rec));
  CHECK(dataset_from_recording(rec) == dataset_from_trajectories(trajs));
  CHECK(dataset_from_recording(recording::Recording{}).empty());
}

TEST_CASE("bc fits a linear teacher and is deterministic") {
  const ExpertDataset d = toy_dataset(8, 40, 3);
  nn::GaussianPolicy init({2, 16, 3}, 1);
  init.set_action_scale(100.0);
  BcConfig cfg;
  cfg.epochs = 150;
  const BcResult a = bc_train(d, init, cfg, 5);
  const BcResult b = bc_train(d, init, cfg, 5);
  CHECK(a.policy == b.policy);
  CHECK(a.train_losses.back() < 0.1 * a.initial_train_loss);
  CHECK_FALSE(a.validation_losses.empty());
  const auto u = a.policy.mean(std::vector<double>{0.5, -0.5});
  CHECK(u[0] == doctest::Approx(0.5).epsilon(0.15));
  CHECK(u[1] == doctest::Approx(0.25).epsilon(0.15));
}

TEST_CASE("bc rejects empty data") {
  CHECK_THROWS_AS(bc_train(ExpertDataset{}, nn::GaussianPolicy({2, 3}, 1), {}, 0),
                  InvalidArgumentError);
}

TEST_CASE("one DAgger round is plain behavioural cloning") {
  DaggerConfig cfg = default_dagger_config();
  cfg.rounds = 1;
  cfg.episodes_per_round = 2;
  cfg.bc.epochs = 20;
  const DaggerResult dg = dagger_train(cfg, 4);
  const nn::GaussianPolicy init =
      make_policy(cfg.expert_task, cfg.hidden, 4, cfg.init_log_std);
  const BcResult bc = bc_train(dagger_expert_dataset(cfg, 4), init, cfg.bc, 4);
  CHECK(dg.policy == bc.policy);
  CHECK(dg.datasets.size() == 1);
}

TEST_CASE("later DAgger rounds aggregate relabelled learner states") {
  DaggerConfig cfg = default_dagger_config();
  cfg.rounds = 2;
  cfg.bc.epochs = 10;
  cfg.learner_max_steps = 30;
  const DaggerResult dg = dagger_train(cfg, 2);
  REQUIRE(dg.datasets.size() == 2);
  const auto& first = dg.datasets[0];
  const auto& second = dg.datasets[1];
  CHECK(second.size() == first.size() + dg.rollout_lengths[1][0]);
  for (size_t r = first.size(); r < second.size(); ++r) {
    const Vec3 a = env::expert_action(second.observations[r], cfg.expert);
    CHECK(second.actions[r] == std::vector<double>{a.x, a.y, a.z});
  }
}

TEST_CASE("value iteration on a two-state chain") {
  GridMdp m;
  m.n_states = 2;
  m.n_actions = 2;
  m.gamma = 0.5;
  m.transitions.assign(8, 0.0);
  // Action 0 stays, action 1 switches state.
  m.t(0, 0, 0) = m.t(1, 0, 1) = 1.0;
  m.t(0, 1, 1) = m.t(1, 1, 0) = 1.0;
  m.reward = std::vector<double>{0, 0, 1, 0};  // reward only for staying in 1
  const auto vi = value_iteration(m, 1e-12);
  CHECK(vi.values[1] == doctest::Approx(2.0));
  CHECK(vi.values[0] == doctest::Approx(1.0));
  CHECK(vi.policy == std::vector<int>{1, 0});
  CHECK(bellman_residual(m, vi.values) < 1e-10);
  m.reward.reset();
  CHECK_THROWS_AS(value_iteration(m), InvalidArgumentError);
}

TEST_CASE("gridworld dynamics and the corner goal") {
  const GridMdp g = make_gridworld(5, 5, 0.9);
  CHECK_NOTHROW(g.validate());
  for (int a = 0; a < 5; ++a) {
    double row = 0;
    for (int s2 = 0; s2 < 25; ++s2) row += g.t(0, a, s2);
    CHECK(row == doctest::Approx(1.0));
  }
  const auto bench = corner_goal_benchmark(5, 50, 20, 7);
  CHECK(bench.demonstrations.size() == 50);
  const auto sets = optimal_action_sets(bench.mdp);
  CHECK(std::find(sets[24].begin(), sets[24].end(), 4) != sets[24].end());
  std::vector<double> truth(25, 0.0);
  truth[24] = 1.0;
  CHECK(greedy_match_rate(bench.mdp, truth) == 1.0);
  std::vector<double> wrong(25, 0.0);
  wrong[0] = 1.0;
  CHECK(greedy_match_rate(bench.mdp, wrong) < 0.5);
}

TEST_CASE("soft policy and visitation frequencies are distributions") {
  const GridMdp g = make_gridworld(3, 3, 0.9);
  std::vector<double> r(45, 0.0);
  r[8 * 5 + 4] = 1.0;
  const auto pi = soft_policy(g, r);
  for (int s = 0; s < 9; ++s) {
    double sum = 0;
    for (int a = 0; a < 5; ++a) sum += pi[s * 5 + a];
    CHECK(sum == doctest::Approx(1.0));
  }
  std::vector<double> start(9, 1.0 / 9), alive(10, 1.0);
  const auto f = visitation_frequencies(g, pi, start, alive);
  double total = 0;
  for (double x : f) total += x;
  CHECK(total == doctest::Approx(1.0));
  CHECK(*std::max_element(f.begin(), f.end()) == f[8]);
}

TEST_CASE("maxent IRL recovers the corner reward") {
  const auto bench = corner_goal_benchmark();
  const auto irl = maxent_irl(bench.mdp, bench.demonstrations, 500, 3.0);
  CHECK(greedy_match_rate(bench.mdp, irl.theta) >= 0.9);
  CHECK(std::max_element(irl.theta.begin(), irl.theta.end()) - irl.theta.begin() == 24);
  CHECK(irl.max_feature_gap < 0.01);
}

TEST_CASE("IRL model features equal the empirical ones for the demo reward") {
  // Soft-optimal demonstrations under theta are reproduced in expectation.
  const auto bench = corner_goal_benchmark(5, 2500, 20, 7);
  std::vector<double> theta(25, 0.0);
  theta[24] = 1.0;
  const auto model = maxent_model_features(bench.mdp, bench.demonstrations, theta);
  const auto emp = empirical_state_frequencies(25, bench.demonstrations);
  for (int s = 0; s < 25; ++s) CHECK(std::abs(model[s] - emp[s]) < 0.01);
}

TEST_CASE("discretizer cells, actions and bins") {
  Discretizer d;
  CHECK(d.cell({0, 0, -5}) == 0);
  CHECK(d.cell({0, 0, 5}) == (d.n_axial - 1) * d.n_radial);
  CHECK(d.radial_index({1, 1, 0}) == d.n_radial - 1);
  CHECK(infer_grid_action(d, 0, 0) == kStay);
  CHECK(infer_grid_action(d, 0, d.n_radial) == kAxialUp);
  CHECK(infer_grid_action(d, d.n_radial, 0) == kAxialDown);
  CHECK(infer_grid_action(d, 0, 1) == kRadialOut);
  CHECK(action_bin({0, 0, 5}) == 4);
  CHECK(action_bin({0, -7, 5}) == 3);
  CHECK(action_bin({}) == 6);
  Discretizer bad;
  bad.n_axial = 1;
  CHECK_THROWS_AS(bad.validate(), InvalidArgumentError);
}

TEST_CASE("discretised expert data gives a valid MDP") {
  const auto trajs = expert_trajectories(3, 0);
  env::TaskEnv probe;
  probe.reset(0);
  const auto grid = default_discretizer(probe.frame(), 8, 3);
  const auto task = discretize_task(trajs, grid);
  CHECK_NOTHROW(task.mdp.validate());
  CHECK(task.trajectories.size() == 3);
  const auto occ = occupancy_estimate(trajs, grid);
  CHECK(occupancy_gap(occ, occ) == 0.0);
  const auto data = dataset_from_trajectories(trajs);
  CHECK(occupancy_gap(occ, occupancy_estimate(data, grid)) < 1e-12);
}

TEST_CASE("discriminator loss and surrogate gradients match finite differences") {
  Rng rng(11);
  env::TaskConfig cfg;
  for (int trial = 0; trial < 20; ++trial) {
    const Discriminator disc = make_discriminator(cfg, {8, 8}, trial);
    const PairBatch e = gaussian_pairs(rng, 6, 0.0);
    const PairBatch p = gaussian_pairs(rng, 5, 0.5);
    const auto g = discriminator_loss(disc, e, p);
    const auto fd = nn::numerical_gradient(
        [&](std::span<const double> w) {
          Discriminator d = disc;
          std::copy(w.begin(), w.end(), d.net.params().begin());
          return discriminator_loss(d, e, p).loss;
        },
        disc.net.params());
    CHECK(nn::relative_error(g.grad, fd) < 1e-5);

    const auto policy = make_policy(cfg, {8}, trial, -0.5);
    auto old = policy;
    auto params = old.params();
    for (auto& w : params) w += 0.02 * rng.normal();
    old.set_params(params);
    std::vector<SurrogateSample> samples;
    for (int i = 0; i < 6; ++i) {
      const auto s = old.sample(e.obs[i], trial, i);
      samples.push_back({e.obs[i], s.u, s.log_prob, rng.normal()});
    }
    const auto sg = surrogate_loss(policy, samples, 0.2);
    const auto sfd = nn::numerical_gradient(
        [&](std::span<const double> w) {
          auto q = policy;
          q.set_params(w);
          return surrogate_loss(q, samples, 0.2).loss;
        },
        policy.params());
    CHECK(nn::relative_error(sg.grad, sfd) < 1e-5);
  }
}

TEST_CASE("surrogate equals the unclipped objective at the old policy") {
  env::TaskConfig cfg;
  const auto policy = make_policy(cfg, {8}, 1);
  std::vector<SurrogateSample> samples;
  std::vector<double> obs(9, 0.1);
  for (int i = 0; i < 4; ++i) {
    const auto s = policy.sample(obs, 1, i);
    samples.push_back({obs, s.u, s.log_prob, i - 1.5});
  }
  CHECK(surrogate_objective(policy, samples, 0.2) ==
        doctest::Approx(surrogate_unclipped(policy, samples)));
  CHECK(surrogate_objective(policy, samples, 0.2) == doctest::Approx(0.0));
}

TEST_CASE("discriminator on identical batches stays at chance") {
  Rng rng(12);
  env::TaskConfig cfg;
  Discriminator disc = make_discriminator(cfg, {16}, 1);
  const PairBatch same = gaussian_pairs(rng, 200, 0.0);
  const auto upd = discriminator_update(disc, same, same, 200, 1e-3, 3);
  CHECK(upd.accuracy == doctest::Approx(0.5).epsilon(0.1));
  CHECK(upd.loss == doctest::Approx(2 * std::log(2.0)).epsilon(1e-3));
  CHECK(disc.prob(same.obs[0], same.actions[0]) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("discriminator separates distinct batches") {
  Rng rng(13);
  env::TaskConfig cfg;
  Discriminator disc = make_discriminator(cfg, {16}, 2);
  const PairBatch expert = gaussian_pairs(rng, 200, -1.0);
  const PairBatch policy = gaussian_pairs(rng, 200, 1.0);
  const auto upd = discriminator_update(disc, expert, policy, 200, 1e-2, 4);
  CHECK(upd.accuracy > 0.9);
  // Orientation: policy pairs toward 1.
  CHECK(disc.prob(policy.obs[0], policy.actions[0]) > 0.5);
  CHECK(disc.prob(expert.obs[0], expert.actions[0]) < 0.5);
}

TEST_CASE("advantages remove the per-step mean and have unit spread") {
  const auto adv = compute_advantages({{1, 0, 0}, {0, 0, 0}, {0, 0, 1}}, 1.0);
  double sum = 0, sq = 0;
  int n = 0;
  for (const auto& a : adv) {
    for (double x : a) {
      sum += x;
      sq += x * x;
      ++n;
    }
  }
  CHECK(sum == doctest::Approx(0.0));
  CHECK(sq / n == doctest::Approx(1.0));
  // Equal returns at every step: nothing to learn.
  const auto flat = compute_advantages({{1, 1}, {1, 1}}, 0.9);
  CHECK(flat[0][0] == 0.0);
}

TEST_CASE("policy gradient step raises the surrogate") {
  env::TaskConfig cfg;
  auto policy = make_policy(cfg, {16}, 3);
  auto opt = nn::OptimState::adam(policy.param_count(), 1e-3);
  std::vector<env::Trajectory> trajs;
  for (uint64_t s = 0; s < 4; ++s) {
    GaussianActor actor(policy, GaussianActor::Mode::kSample);
    auto t = env::rollout(actor, cfg, s, 20);
    t.costs.resize(t.size());
    for (size_t i = 0; i < t.size(); ++i) t.costs[i] = -t.actions[i].z / 1000.0;
    trajs.push_back(std::move(t));
  }
  const auto stats = policy_gradient_step(policy, opt, trajs, {}, 1);
  CHECK(stats.samples == 80);
  CHECK(stats.surrogate_after > stats.surrogate_before);
  trajs[0].costs.clear();
  CHECK_THROWS_AS(policy_gradient_step(policy, opt, trajs, {}, 1), InvalidArgumentError);
}

TEST_CASE("arc-length resampling and distances") {
  const Path line{{0, 0, 0}, {0, 0, 1}, {0, 0, 3}};
  const Path r = resample_by_arc_length(line, 4);
  REQUIRE(r.size() == 4);
  CHECK(r[1].z == doctest::Approx(1.0));
  CHECK(r[3].z == doctest::Approx(3.0));
  CHECK(distance_to_polyline({1, 0, 2}, line) == doctest::Approx(1.0));
  CHECK(distance_to_polyline({0, 0, -2}, line) == doctest::Approx(2.0));
  CHECK(path_error(line, line) == doctest::Approx(0.0));
  CHECK_THROWS_AS(resample_by_arc_length(Path{{1, 1, 1}, {1, 1, 1}}), InvalidArgumentError);
}

TEST_CASE("mirror-image paths average onto the reference") {
  Path ref, left, right;
  for (int i = 0; i <= 10; ++i) {
    const double z = 0.1 * i;
    const double off = 0.1 * std::sin(3.14159 * z);
    ref.push_back({0, 0, z});
    left.push_back({off, 0, z});
    right.push_back({-off, 0, z});
  }
  const auto rep = woc_aggregate({left, right}, ref);
  CHECK(rep.aggregate_error < 1e-12);
  CHECK(rep.individual_errors[0] == doctest::Approx(rep.individual_errors[1]));
  CHECK(rep.median_individual_error > 0.0);
  CHECK_THROWS_AS(woc_aggregate({left}, ref), InvalidArgumentError);
}

TEST_CASE("a noisy crowd aggregates better than its median member") {
  Path ref;
  for (int i = 0; i <= 20; ++i) ref.push_back({0, 0, -1.0 + 0.1 * i});
  const auto crowd = noisy_axis_paths(ref, 50, 0.1, 3);
  CHECK(crowd.size() == 50);
  const auto rep = woc_aggregate(crowd, ref);
  CHECK(rep.aggregate_error < rep.median_individual_error);
  CHECK(rep.improvement_ratio ==
        doctest::Approx(rep.median_individual_error / rep.aggregate_error));
}

TEST_CASE("sign test arithmetic") {
  CHECK(binomial_upper_tail(5, 5) == doctest::Approx(1.0 / 32));
  CHECK(binomial_upper_tail(5, 0) == doctest::Approx(1.0));
  CHECK(binomial_upper_tail(10, 8) == doctest::Approx(56.0 / 1024));
  const bool cand[] = {true, true, true, false, true, false};
  const bool base[] = {false, false, true, true, true, false};
  const auto t = sign_test(cand, base);
  CHECK(t.wins == 2);
  CHECK(t.losses == 1);
  CHECK(t.ties == 3);
  CHECK(t.p_value == doctest::Approx(0.5));
  const bool none[] = {true, true};
  CHECK(sign_test(none, none).p_value == 1.0);
  CHECK_THROWS_AS(sign_test(cand, none), DimensionError);
}
