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

#include <cmath>
#include <vector>

#include "demoforge/common/error.h"
#include "demoforge/env/expert.h"
#include "demoforge/env/policy.h"
#include "demoforge/env/rollout.h"
#include "demoforge/env/task_env.h"
#include "demoforge/md/builders.h"

using namespace demoforge;
using namespace demoforge::env;

namespace {

TubeFrame unit_tube() {
  TubeFrame f;
  f.entrance = -0.3;
  f.exit = 0.3;
  f.radius = 0.35;
  return f;
}

Observation obs_at(const Vec3& x, const Vec3& v = {}) {
  return {x.x, x.y, x.z, v.x, v.y, v.z, 0, 0, 1};
}

}  // namespace

TEST_CASE("success needs an entry from outside and a pass through the bore") {
  const TubeFrame f = unit_tube();
  SUBCASE("straight through the axis") {
    std::vector<Vec3> path;
    for (double z = -0.8; z <= 0.8; z += 0.05) path.push_back({0, 0, z});
    CHECK(is_success(path, f));
  }
  SUBCASE("stopping inside is not success") {
    CHECK_FALSE(is_success(std::vector<Vec3>{{0, 0, -0.8}, {0, 0, 0.0}, {0, 0, 0.35}}, f));
  }
  SUBCASE("going around the outside is not success") {
    std::vector<Vec3> path;
    for (double z = -0.8; z <= 0.8; z += 0.05) path.push_back({0.6, 0, z});
    CHECK_FALSE(is_success(path, f));
  }
  SUBCASE("starting past the exit is not success") {
    CHECK_FALSE(is_success(std::vector<Vec3>{{0, 0, 0.8}, {0, 0, 0.9}}, f));
  }
  SUBCASE("the margin counts on both ends") {
    CHECK_FALSE(is_success(std::vector<Vec3>{{0, 0, -0.35}, {0, 0, 0.45}}, f));
    CHECK(is_success(std::vector<Vec3>{{0, 0, -0.41}, {0, 0, 0.41}}, f));
  }
  SUBCASE("once reached, success sticks") {
    SuccessTracker t(f.entrance, f.exit, f.radius, 0.1);
    t.update({0, 0, -0.5});
    CHECK(t.update({0, 0, 0.5}));
    CHECK(t.update({0, 0, -2.0}));
  }
}

TEST_CASE("expert waypoints and forces") {
  const TubeFrame f = unit_tube();
  const auto cfg = default_expert_config(f);
  REQUIRE(cfg.waypoints.size() == 3);

  SUBCASE("off-axis before the tube aims at the staging point") {
    CHECK(active_waypoint({0.3, 0, -0.6}, cfg) == 0);
  }
  SUBCASE("on-axis progress selects later waypoints") {
    CHECK(active_waypoint({0, 0, -1.0}, cfg) == 0);
    CHECK(active_waypoint({0, 0, -0.7}, cfg) == 1);
    CHECK(active_waypoint({0, 0, 0.0}, cfg) == 2);
    CHECK(active_waypoint({0, 0, 2.0}, cfg) == 2);
  }
  SUBCASE("the force vanishes at rest on the last waypoint") {
    const Vec3 a = expert_action(obs_at(cfg.waypoints.back()), cfg);
    CHECK(norm(a) == doctest::Approx(0.0));
  }
  SUBCASE("PD law below the clamp") {
    const Vec3 x{0.01, -0.02, 0.7};
    const Vec3 v{0.1, 0.0, -0.2};
    const Vec3 a = expert_action(obs_at(x, v), cfg);
    const Vec3 want = (cfg.waypoints[2] - x) * cfg.kp - v * cfg.kd;
    CHECK(norm(a - want) < 1e-9);
  }
  SUBCASE("the output norm never exceeds the clamp") {
    const Vec3 a = expert_action(obs_at({0, 0, -30.0}), cfg);
    CHECK(norm(a) == doctest::Approx(cfg.max_force));
  }
  SUBCASE("validation") {
    auto bad = cfg;
    bad.waypoints.clear();
    CHECK_THROWS_AS(bad.validate(), InvalidArgumentError);
    bad = cfg;
    bad.kp = -1;
    CHECK_THROWS_AS(ExpertPolicy{bad}, InvalidArgumentError);
    CHECK_THROWS_AS(expert_action(Observation{0, 0, 0}, cfg), DimensionError);
  }
}

TEST_CASE("environment lifecycle") {
  TaskEnv env;
  CHECK_THROWS_AS(env.step({}), LifecycleError);
  const auto obs = env.reset(3);
  CHECK(obs.size() == static_cast<size_t>(kNanotubeObsDim));
  CHECK(env.com_local().z < env.frame().entrance);
  TaskConfig short_cfg;
  short_cfg.max_steps = 2;
  TaskEnv short_env(short_cfg);
  short_env.reset(1);
  short_env.step({});
  CHECK(short_env.step({}).done);
  CHECK_THROWS_AS(short_env.step({}), LifecycleError);
  CHECK_THROWS_AS(TaskEnv(TaskConfig{.n_substeps = 0}), InvalidArgumentError);
}

TEST_CASE("applied forces are clamped") {
  TaskEnv env;
  env.reset(0);
  const auto r = env.step({5000, 0, 0});
  CHECK(norm(r.info.applied_force) == doctest::Approx(env.config().max_force));
}

TEST_CASE("start jitter stays within bounds") {
  TaskConfig cfg;
  cfg.jitter = 0.3;
  TaskEnv env(cfg);
  for (uint64_t s = 0; s < 20; ++s) {
    env.reset(s);
    const Vec3 x = env.com_local();
    CHECK(std::abs(x.x) <= 0.3 + 1e-12);
    CHECK(std::abs(x.y) <= 0.3 + 1e-12);
  }
}

TEST_CASE("expert rollouts succeed and are deterministic") {
  TaskConfig cfg;
  const auto ecfg = default_expert_config(cfg.build.tube);
  ExpertPolicy expert(ecfg);
  const Trajectory a = rollout(expert, cfg, 11, cfg.max_steps);
  const Trajectory b = rollout(expert, cfg, 11, cfg.max_steps);
  CHECK(a.success);
  CHECK(a.size() < 200);
  CHECK(a.com_path.size() == a.size() + 1);
  CHECK(a.observations == b.observations);
  CHECK(a.actions == b.actions);
  const Trajectory c = rollout(expert, cfg, 12, cfg.max_steps);
  CHECK(c.observations != a.observations);
}

TEST_CASE("random policy rarely threads the tube") {
  TaskConfig cfg;
  int successes = 0;
  for (uint64_t s = 0; s < 5; ++s) {
    RandomPolicy policy(cfg.max_force);
    successes += rollout(policy, cfg, s, 300).success;
  }
  CHECK(successes <= 1);
}

TEST_CASE("a recorded rollout has frames, episode markers and agent steps") {
  TaskConfig cfg;
  ExpertPolicy expert(default_expert_config(cfg.build.tube));
  recording::Recording rec(rollout_header(cfg, 4));
  const Trajectory t = rollout(expert, cfg, 4, cfg.max_steps, &rec);
  CHECK(rec.frame_count() == t.size() + 1);
  CHECK(rec.events().front().key == "episode/start");
  CHECK(rec.events().back().key == "episode/end");
  CHECK(rec.events().back().value["success"] == t.success);
  size_t steps = 0;
  for (const auto& e : rec.events()) steps += e.key == "agent/step";
  CHECK(steps == t.size());
  // The last frame carries the final applied force on the controlled atom.
  const auto& last = rec.frames().back();
  Vec3 total;
  for (const auto& f : last.user_forces) total += f;
  CHECK(norm(total - t.applied.back()) < 1e-9);
}

TEST_CASE("non-finite policy output is rejected") {
  TaskConfig cfg;
  LambdaPolicy bad([](const Observation&, int) {
    return Decision{{NAN, 0, 0}, 0.0};
  });
  CHECK_THROWS_AS(rollout(bad, cfg, 0, 10), PolicyOutputError);
}

TEST_CASE("alanine task observes the chain") {
  TaskConfig cfg;
  cfg.task = md::TaskId::kAlanine17;
  TaskEnv env(cfg);
  const auto obs = env.reset(0);
  CHECK(obs.size() == static_cast<size_t>(kAlanineObsDim));
  CHECK_FALSE(env.step({0, 0, 100}).done);
}
