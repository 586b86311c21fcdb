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

#include "demoforge/env/rollout.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "demoforge/common/error.h"

namespace demoforge::env {
namespace {

using nlohmann::json;

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

class EpisodeWriter {
 public:
  EpisodeWriter(recording::Recording& rec, TaskEnv& env)
      : rec_(rec), env_(env) {
    if (!rec_.frames().empty()) {
      step_ = rec_.frames().back().step + env.config().n_substeps;
      wall_ = rec_.frames().back().wall_time_ms + kRolloutTickMs;
    }
    if (!rec_.events().empty()) {
      wall_ = std::max(wall_, rec_.events().back().wall_time_ms);
    }
    for (const auto& e : rec_.events()) {
      if (e.key == "episode/start") ++episode_;
    }
    if (rec_.header().topology.atom_count() == 0) {
      rec_.header().topology = env.simulation().topology();
    }
  }

  int episode() const { return episode_; }

  void frame(const Vec3* applied) {
    auto& sim = env_.simulation();
    recording::Frame f;
    f.step = step_;
    f.sim_time = sim.state().time;
    f.wall_time_ms = wall_;
    f.positions = sim.state().positions;
    f.user_forces.assign(f.positions.size(), Vec3{});
    if (applied) f.user_forces[env_.controlled_atom()] = *applied;
    const auto e = sim.energies();
    f.potential = e.potential;
    f.kinetic = e.kinetic;
    rec_.append_frame(std::move(f));
  }

  void event(std::string key, json value) {
    rec_.append_event({wall_, std::move(key), std::move(value)});
  }

  void tick() {
    step_ += env_.config().n_substeps;
    wall_ += kRolloutTickMs;
  }

 private:
  recording::Recording& rec_;
  TaskEnv& env_;
  int64_t step_ = 0;
  int64_t wall_ = 0;
  int episode_ = 0;
};

}  // namespace

recording::RecordingHeader rollout_header(const TaskConfig& config,
                                          uint64_t seed) {
  recording::RecordingHeader h;
  h.task_id = std::string(md::to_string(config.task));
  h.dt = config.dt;
  h.seed = seed;
  h.frame_interval = config.n_substeps;
  h.metadata = {{"source", "rollout"},
                {"n_substeps", config.n_substeps},
                {"max_steps", config.max_steps},
                {"jitter", config.jitter},
                {"margin", config.margin},
                {"max_force", config.max_force},
                {"gamma", config.gamma},
                {"temperature", config.temperature}};
  return h;
}

Trajectory rollout(Policy& policy, const TaskConfig& config, uint64_t seed,
                   int max_steps, recording::Recording* rec) {
  if (max_steps < 1) throw InvalidArgumentError("max_steps must be >= 1");
  TaskConfig cfg = config;
  cfg.max_steps = max_steps;
  TaskEnv env(cfg);
  Trajectory traj;
  traj.task_id = std::string(md::to_string(cfg.task));
  traj.seed = seed;

  Observation obs = env.reset(seed);
  policy.begin_episode(seed);
  std::unique_ptr<EpisodeWriter> writer;
  if (rec) {
    writer = std::make_unique<EpisodeWriter>(*rec, env);
    writer->event("episode/start",
                  {{"episode", writer->episode()}, {"seed", seed}});
    writer->frame(nullptr);
  }
  traj.com_path.push_back(env.com_local());

  for (int t = 0; !env.done(); ++t) {
    const Decision d = policy.act(obs, t);
    if (!is_finite(d.action) || !std::isfinite(d.log_prob)) {
      throw PolicyOutputError("policy produced a non-finite output at step " +
                              std::to_string(t));
    }
    if (writer) {
      writer->event("agent/step", {{"episode", writer->episode()},
                                   {"t", t},
                                   {"obs", obs},
                                   {"action", vec_json(d.action)},
                                   {"log_prob", d.log_prob}});
    }
    StepResult r = env.step(d.action);
    traj.observations.push_back(std::move(obs));
    traj.actions.push_back(d.action);
    traj.applied.push_back(r.info.applied_force);
    traj.log_probs.push_back(d.log_prob);
    traj.com_path.push_back(env.com_local());
    obs = std::move(r.obs);
    if (writer) {
      writer->tick();
      writer->frame(&r.info.applied_force);
    }
  }
  traj.final_observation = obs;
  traj.terminal = true;
  traj.success = env.success();
  if (writer) {
    writer->event("episode/end", {{"episode", writer->episode()},
                                  {"seed", seed},
                                  {"length", traj.size()},
                                  {"success", traj.success}});
  }
  return traj;
}

}  // namespace demoforge::env
