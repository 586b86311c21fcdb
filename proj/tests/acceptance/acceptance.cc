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

// Acceptance run: one PASS/FAIL line per benchmark criterion.
//
//   acceptance [--only name[,name...]] [--list]
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "demoforge/common/error.h"
#include "demoforge/common/random.h"
#include "demoforge/env/expert.h"
#include "demoforge/env/rollout.h"
#include "demoforge/il/actor.h"
#include "demoforge/il/bc.h"
#include "demoforge/il/dagger.h"
#include "demoforge/il/dataset.h"
#include "demoforge/il/gail.h"
#include "demoforge/il/mdp.h"
#include "demoforge/il/stats.h"
#include "demoforge/il/woc.h"
#include "demoforge/md/builders.h"
#include "demoforge/md/forcefield.h"
#include "demoforge/md/integrator.h"
#include "demoforge/nn/gradcheck.h"
#include "demoforge/nn/loss.h"
#include "demoforge/recording/container.h"
#include "demoforge/recording/csv.h"
#include "support/random_recording.h"

using namespace demoforge;

namespace {

// Pinned thresholds.
constexpr double kForceTolerance = 1e-5;
constexpr int kForcePerturbations = 100;
constexpr double kEnergyDriftTolerance = 1e-4;
constexpr int kNveSteps = 10000;
constexpr int kRoundTrips = 1000;
constexpr double kGradientTolerance = 1e-5;
constexpr int kGradientConfigs = 20;
constexpr int kExpertMinSuccesses = 95;
constexpr int kBcTrainEpisodes = 200;
constexpr double kBcMinSuccess = 0.70;
constexpr double kDaggerAlpha = 0.05;
constexpr int kDaggerTrainSeeds = 10;
constexpr int kDaggerEvalPerSeed = 10;
constexpr double kIrlMinMatch = 0.90;
constexpr double kGailMinMargin = 0.30;
constexpr double kGailMaxAccuracy = 0.65;
constexpr int kGailAccuracyWindow = 10;
constexpr int kWocPaths = 50;
constexpr int kEvalEpisodes = 100;

// Evaluation seeds, disjoint from every training seed below.
constexpr uint64_t kExpertEvalBase = 1000;
constexpr uint64_t kHeldOutBase = 100000;
constexpr uint64_t kGailEvalBase = 200000;
constexpr uint64_t kDaggerEvalBase = 300000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double force_fd_error(const md::ForceField& field, std::vector<Vec3> x) {
  constexpr double h = 1e-6;
  const md::ForceResult r = field.compute(x);
  double worst = 0.0, scale = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    for (int d = 0; d < 3; ++d) {
      const double x0 = x[i][d];
      x[i][d] = x0 + h;
      const double up = field.potential(x);
      x[i][d] = x0 - h;
      const double down = field.potential(x);
      x[i][d] = x0;
      worst = std::max(worst, std::abs(-(up - down) / (2 * h) - r.forces[i][d]));
      scale = std::max(scale, std::abs(r.forces[i][d]));
    }
  }
  return worst / std::max(scale, 1e-12);
}

Outcome force_field() {
  Rng rng(2026);
  double worst = 0.0;
  for (md::TaskId task : {md::TaskId::kNanotube, md::TaskId::kAlanine17}) {
    const auto [t, s] = md::build_system(task, 0);
    const md::ForceField field(t);
    for (int k = 0; k < kForcePerturbations; ++k) {
      std::vector<Vec3> x = s.positions;
      for (auto& p : x) {
        p += Vec3{rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02),
                  rng.uniform(-0.02, 0.02)};
      }
      worst = std::max(worst, force_fd_error(field, x));
    }
  }
  return {worst < kForceTolerance,
          fmt("worst rel err %.2e over %d x 2 configs", worst, kForcePerturbations)};
}

Outcome nve() {
  std::string detail;
  bool pass = true;
  for (md::TaskId task : {md::TaskId::kNanotube, md::TaskId::kAlanine17}) {
    const auto [t, s] = md::build_system(task, 0);
    md::Simulation sim(t, s);
    const double e0 = sim.energies().total();
    double worst = 0.0;
    for (int i = 1; i <= kNveSteps; ++i) {
      sim.step();
      if (i % 10 == 0) {
        worst = std::max(worst, std::abs(sim.energies().total() - e0) / std::abs(e0));
      }
    }
    pass = pass && worst < kEnergyDriftTolerance;
    detail += fmt("%s drift %.2e; ", std::string(md::to_string(task)).c_str(), worst);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome recording_round_trip() {
  int exact = 0;
  for (int k = 0; k < kRoundTrips; ++k) {
    const auto rec = testing::random_recording(static_cast<uint64_t>(k));
    const std::string bytes = recording::encode_recording(rec);
    const auto back = recording::decode_recording(bytes);
    exact += (back == rec && recording::encode_recording(back) == bytes) ? 1 : 0;
  }
  const auto [t, s] = md::build_system(md::TaskId::kNanotube, 0);
  recording::RecordingHeader h;
  h.task_id = "nanotube";
  h.topology = t;
  recording::Recording rec(h);
  recording::Frame f;
  f.positions = s.positions;
  f.user_forces.assign(s.positions.size(), Vec3{});
  rec.append_frame(f);
  const std::string csv = recording::export_csv(rec, recording::CsvStyle::kTable1);
  std::istringstream in(csv);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  const std::string want_first =
      "C1,0,\"[" + recording::format_float(s.positions[0].x) + ", " +
      recording::format_float(s.positions[0].y) + ", " +
      recording::format_float(s.positions[0].z) + "]\",\"[0.0, 0.0, 0.0]\"";
  const bool csv_ok = header == "atom name,time,coordinates,user forces" &&
                      first == want_first;
  return {exact == kRoundTrips && csv_ok,
          fmt("%d/%d bit-exact, table1 header and triples %s", exact, kRoundTrips,
              csv_ok ? "match" : "differ")};
}

Outcome gradients() {
  Rng rng(99);
  env::TaskConfig task;
  double worst = 0.0;
  auto batch = [&](size_t rows, int dim, double scale) {
    nn::Batch b(rows, std::vector<double>(dim));
    for (auto& r : b) {
      for (auto& x : r) x = scale * rng.normal();
    }
    return b;
  };
  for (int trial = 0; trial < kGradientConfigs; ++trial) {
    std::vector<int> hidden;
    for (int l = 0, n = 1 + static_cast<int>(rng.below(2)); l < n; ++l) {
      hidden.push_back(4 + static_cast<int>(rng.below(12)));
    }
    // Approximator losses.
    nn::GaussianPolicy policy = il::make_policy(task, hidden, trial, rng.uniform(-2, 0));
    const nn::Batch obs = batch(6, task.obs_dim(), 0.5);
    const nn::Batch act = batch(6, 3, 0.5);
    for (nn::LossKind kind : {nn::LossKind::kMse, nn::LossKind::kNll}) {
      const auto g = nn::policy_loss(kind, policy, obs, act);
      const auto fd = nn::numerical_gradient(
          [&](std::span<const double> p) {
            auto q = policy;
            q.set_params(p);
            return nn::policy_loss(kind, q, obs, act).loss;
          },
          policy.params());
      worst = std::max(worst, nn::relative_error(g.grad, fd));
    }
    // Discriminator loss.
    const il::Discriminator disc = il::make_discriminator(task, hidden, trial + 100);
    il::PairBatch e{batch(5, task.obs_dim(), 0.5), batch(5, 3, 300.0)};
    il::PairBatch p{batch(7, task.obs_dim(), 0.5), batch(7, 3, 300.0)};
    const auto dg = il::discriminator_loss(disc, e, p);
    const auto dfd = nn::numerical_gradient(
        [&](std::span<const double> w) {
          auto d = disc;
          std::copy(w.begin(), w.end(), d.net.params().begin());
          return il::discriminator_loss(d, e, p).loss;
        },
        disc.net.params());
    worst = std::max(worst, nn::relative_error(dg.grad, dfd));
    // Clipped surrogate, evaluated away from its kinks.
    auto old = policy;
    auto params = old.params();
    for (auto& w : params) w += 0.02 * rng.normal();
    old.set_params(params);
    std::vector<il::SurrogateSample> samples;
    for (size_t i = 0; i < obs.size(); ++i) {
      const auto s = old.sample(obs[i], trial, i);
      samples.push_back({obs[i], s.u, s.log_prob, rng.normal()});
    }
    const auto sg = il::surrogate_loss(policy, samples, 0.2);
    const auto sfd = nn::numerical_gradient(
        [&](std::span<const double> w) {
          auto q = policy;
          q.set_params(w);
          return il::surrogate_loss(q, samples, 0.2).loss;
        },
        policy.params());
    worst = std::max(worst, nn::relative_error(sg.grad, sfd));
  }
  return {worst < kGradientTolerance,
          fmt("worst rel err %.2e over %d configs (mse, nll, discriminator, surrogate)",
              worst, kGradientConfigs)};
}

int evaluate(env::Policy& policy, const env::TaskConfig& task, uint64_t base,
             int episodes) {
  int successes = 0;
  for (int k = 0; k < episodes; ++k) {
    successes += env::rollout(policy, task, base + k, task.max_steps).success ? 1 : 0;
  }
  return successes;
}

Outcome scripted_expert() {
  env::TaskConfig task;
  env::ExpertPolicy expert(env::default_expert_config(task.build.tube));
  const int n = evaluate(expert, task, kExpertEvalBase, kEvalEpisodes);
  return {n >= kExpertMinSuccesses, fmt("%d/%d successes", n, kEvalEpisodes)};
}

Outcome behavioural_cloning() {
  env::TaskConfig task;
  env::ExpertPolicy expert(env::default_expert_config(task.build.tube));
  std::vector<env::Trajectory> demos;
  for (int k = 0; k < kBcTrainEpisodes; ++k) {
    demos.push_back(env::rollout(expert, task, k, task.max_steps));
  }
  const auto data = il::dataset_from_trajectories(demos);
  const auto fit =
      il::bc_train(data, il::make_policy(task, {64, 64}, 1), il::BcConfig{}, 1);
  il::GaussianActor actor(fit.policy, il::GaussianActor::Mode::kMean);
  const int n = evaluate(actor, task, kHeldOutBase, kEvalEpisodes);
  return {n >= kBcMinSuccess * kEvalEpisodes,
          fmt("%d/%d held-out successes from %zu rows", n, kEvalEpisodes, data.size())};
}

Outcome dagger_vs_bc() {
  const il::DaggerConfig cfg = il::default_dagger_config(0.3);
  const env::TaskConfig& eval_task = cfg.learner_task;
  constexpr size_t kPairs = kDaggerTrainSeeds * kDaggerEvalPerSeed;
  bool bc_ok[kPairs], dg_ok[kPairs];
  int nb = 0, nd = 0;
  size_t i = 0;
  for (int k = 1; k <= kDaggerTrainSeeds; ++k) {
    const auto res = il::dagger_train(cfg, k);
    for (int e = 0; e < kDaggerEvalPerSeed; ++e, ++i) {
      const uint64_t seed = kDaggerEvalBase + 100 * k + e;
      il::GaussianActor bc(res.fits.front().policy, il::GaussianActor::Mode::kMean);
      il::GaussianActor dg(res.policy, il::GaussianActor::Mode::kMean);
      bc_ok[i] = env::rollout(bc, eval_task, seed, eval_task.max_steps).success;
      dg_ok[i] = env::rollout(dg, eval_task, seed, eval_task.max_steps).success;
      nb += bc_ok[i];
      nd += dg_ok[i];
    }
  }
  const auto t = il::sign_test(dg_ok, bc_ok);
  return {t.p_value < kDaggerAlpha,
          fmt("dagger %d vs bc %d of %zu at jitter 0.3; wins %d losses %d p=%.2e", nd, nb,
              kPairs, t.wins, t.losses, t.p_value)};
}

Outcome maxent_irl() {
  const auto bench = il::corner_goal_benchmark();
  const auto irl = il::maxent_irl(bench.mdp, bench.demonstrations, 500, 3.0);
  const double rate = il::greedy_match_rate(bench.mdp, irl.theta);
  return {rate >= kIrlMinMatch, fmt("greedy match %.0f%% of 25 states", 100 * rate)};
}

Outcome gail() {
  env::TaskConfig task;
  const il::GailConfig cfg;
  const auto expert = il::fixed_horizon_demos(
      task, env::default_expert_config(task.build.tube), 200, cfg.horizon, 0);
  const auto res = il::gail_train(task, expert, cfg, 1);
  il::GaussianActor actor(res.policy, il::GaussianActor::Mode::kMean);
  const int ours = evaluate(actor, task, kGailEvalBase, kEvalEpisodes);
  env::RandomPolicy random(task.max_force);
  const int base = evaluate(random, task, kGailEvalBase, kEvalEpisodes);
  const auto& h = res.history;
  auto window_mean = [&](size_t begin) {
    double s = 0.0;
    for (size_t i = begin; i < begin + kGailAccuracyWindow; ++i) {
      s += h[i].discriminator_accuracy;
    }
    return s / kGailAccuracyWindow;
  };
  const double early = window_mean(0);
  const double final_acc = window_mean(h.size() - kGailAccuracyWindow);
  const bool margin_ok = ours - base >= kGailMinMargin * kEvalEpisodes;
  return {margin_ok && final_acc <= kGailMaxAccuracy,
          fmt("gail %d vs random %d of %d; disc acc %.3f -> %.3f (last %d its), "
              "last iteration %.3f",
              ours, base, kEvalEpisodes, early, final_acc, kGailAccuracyWindow,
              h.back().discriminator_accuracy)};
}

Outcome wisdom_of_crowd() {
  env::TaskEnv probe;
  probe.reset(0);
  const auto& f = probe.frame();
  const std::vector<Vec3> axis{{0, 0, f.entrance - 0.5}, {0, 0, f.exit + 0.5}};
  const auto paths = il::noisy_axis_paths(axis, kWocPaths, 0.1, 1);
  const auto r = il::woc_aggregate(paths, axis);
  return {r.aggregate_error < r.median_individual_error,
          fmt("aggregate %.4f nm vs median individual %.4f nm, ratio %.1fx "
              "(human crowds: 2-5x)",
              r.aggregate_error, r.median_individual_error, r.improvement_ratio)};
}

Outcome core_only() {
  // This binary links the core library alone; reaching here means every
  // benchmark above ran without the service or any client.
  return {true, "linked against the core library only"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"force_field_fd", 60, force_field},
      {"nve_energy_drift", 60, nve},
      {"recording_round_trip", 60, recording_round_trip},
      {"gradient_suite", 60, gradients},
      {"scripted_expert", 600, scripted_expert},
      {"bc_benchmark", 1800, behavioural_cloning},
      {"dagger_vs_bc", 3600, dagger_vs_bc},
      {"maxent_irl_gridworld", 60, maxent_irl},
      {"gail_benchmark", 7200, gail},
      {"woc_aggregation", 60, wisdom_of_crowd},
      {"core_only_build", 1, core_only},
  };

  std::vector<std::string> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--list") {
      for (const auto& c : criteria) std::printf("%s\n", c.name.c_str());
      return 0;
    }
    if (arg == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string name; std::getline(ss, name, ',');) only.push_back(name);
    } else {
      std::fprintf(stderr, "usage: acceptance [--only a,b] [--list]\n");
      return 2;
    }
  }

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += fmt("; over the %.0f s budget", c.budget_s);
    }
    std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.name.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
