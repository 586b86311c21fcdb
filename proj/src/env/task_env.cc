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

#include "demoforge/env/task_env.h"

#include <cmath>
#include <string>

#include "demoforge/common/error.h"
#include "demoforge/common/random.h"

namespace demoforge::env {

TubeFrame tube_frame(const md::Topology& topology, int carbons_per_ring) {
  const auto& rs = topology.restraints;
  if (rs.empty() || carbons_per_ring <= 0 ||
      rs.size() % static_cast<size_t>(carbons_per_ring) != 0 ||
      rs.size() < 2 * static_cast<size_t>(carbons_per_ring)) {
    throw InvalidArgumentError("topology does not describe a ringed tube");
  }
  auto ring_centroid = [&](size_t ring) {
    Vec3 c;
    for (int j = 0; j < carbons_per_ring; ++j) {
      c += rs[ring * carbons_per_ring + j].anchor;
    }
    return c / carbons_per_ring;
  };
  const size_t rings = rs.size() / carbons_per_ring;
  Vec3 origin;
  for (const auto& r : rs) origin += r.anchor;
  origin = origin / static_cast<double>(rs.size());

  TubeFrame f;
  f.origin = origin;
  const Vec3 first = ring_centroid(0);
  const Vec3 last = ring_centroid(rings - 1);
  const Vec3 axis = last - first;
  f.ez = axis / norm(axis);
  Vec3 radial = rs[0].anchor - first;
  radial -= f.ez * dot(radial, f.ez);
  f.ex = radial / norm(radial);
  f.ey = cross(f.ez, f.ex);
  f.entrance = dot(first - origin, f.ez);
  f.exit = dot(last - origin, f.ez);
  double r_sum = 0.0;
  for (const auto& r : rs) {
    const Vec3 local = f.to_local(r.anchor);
    r_sum += std::hypot(local.x, local.y);
  }
  f.radius = r_sum / static_cast<double>(rs.size());
  return f;
}

std::vector<int> methane_atoms(const md::Topology& topology) {
  return {topology.index_of("C61"), topology.index_of("H1"),
          topology.index_of("H2"), topology.index_of("H3"),
          topology.index_of("H4")};
}

Vec3 center_of_mass(const md::Topology& topology, std::span<const int> atoms,
                    std::span<const Vec3> values) {
  Vec3 sum;
  double mass = 0.0;
  for (int a : atoms) {
    sum += values[a] * topology.masses[a];
    mass += topology.masses[a];
  }
  return sum / mass;
}

Observation nanotube_observation(const TubeFrame& frame,
                                 const md::Topology& topology,
                                 std::span<const Vec3> positions,
                                 std::span<const Vec3> velocities) {
  const auto atoms = methane_atoms(topology);
  const Vec3 x = frame.to_local(center_of_mass(topology, atoms, positions));
  const Vec3 v =
      frame.to_local_dir(center_of_mass(topology, atoms, velocities));
  Vec3 to_entrance = Vec3{0.0, 0.0, frame.entrance} - x;
  const double len = norm(to_entrance);
  to_entrance = len > 1e-12 ? to_entrance / len : Vec3{0.0, 0.0, 1.0};
  return {x.x, x.y, x.z, v.x, v.y, v.z,
          to_entrance.x, to_entrance.y, to_entrance.z};
}

Observation alanine_observation(std::span<const Vec3> positions,
                                std::span<const Vec3> velocities) {
  const size_t n = positions.size();
  if (n < 2) throw InvalidArgumentError("chain needs at least two beads");
  Vec3 cx, cv;
  for (size_t i = 0; i < n; ++i) {
    cx += positions[i];
    cv += velocities[i];
  }
  cx = cx / static_cast<double>(n);
  cv = cv / static_cast<double>(n);
  const Vec3 blocks[4] = {positions[0] - cx, positions[n - 1] - cx,
                          velocities[0] - cv, velocities[n - 1] - cv};
  Observation obs;
  obs.reserve(kAlanineObsDim);
  for (const auto& b : blocks) {
    obs.push_back(b.x);
    obs.push_back(b.y);
    obs.push_back(b.z);
  }
  return obs;
}

bool SuccessTracker::update(const Vec3& local) {
  if (success_) return true;
  const double axial = local.z;
  const double radial = std::hypot(local.x, local.y);
  if (axial < entrance_ - margin_) {
    armed_ = true;
  } else if (axial >= entrance_ && axial <= exit_ && radial >= radius_) {
    armed_ = false;
  }
  if (armed_ && axial > exit_ + margin_) success_ = true;
  return success_;
}

bool is_success(std::span<const Vec3> local_history, const TubeFrame& frame,
                double margin) {
  SuccessTracker tracker(frame.entrance, frame.exit, frame.radius, margin);
  for (const auto& p : local_history) tracker.update(p);
  return tracker.success();
}

TaskEnv::TaskEnv(TaskConfig config) : config_(std::move(config)) {
  if (config_.n_substeps < 1 || config_.max_steps < 1) {
    throw InvalidArgumentError("n_substeps and max_steps must be positive");
  }
  if (!(config_.dt > 0.0) || !(config_.max_force >= 0.0)) {
    throw InvalidArgumentError("dt must be positive and max_force >= 0");
  }
}

Observation TaskEnv::reset(uint64_t seed) {
  seed_ = seed;
  auto [topology, state] = md::build_system(config_.task, seed, config_.build);
  const auto thermostat = md::Thermostat::langevin(
      config_.gamma, config_.temperature, mix64(seed ^ 0x6c616e67ULL));

  if (config_.task == md::TaskId::kNanotube) {
    frame_ = tube_frame(topology, config_.build.tube.carbons_per_ring);
    methane_ = methane_atoms(topology);
    controlled_atom_ = methane_.front();
    Rng rng(mix64(seed ^ 0x7265736574ULL));
    const double j = config_.jitter;
    const Vec3 target_local{
        rng.uniform(-j, j), rng.uniform(-j, j),
        frame_.entrance - config_.build.methane.start_offset +
            rng.uniform(-j, j)};
    const Vec3 shift = frame_.to_world(target_local) -
                       center_of_mass(topology, methane_, state.positions);
    for (int a : methane_) state.positions[a] += shift;
    tracker_ = std::make_unique<SuccessTracker>(
        frame_.entrance, frame_.exit, frame_.radius, config_.margin);
  } else {
    frame_ = TubeFrame{};
    methane_.clear();
    controlled_atom_ = topology.atom_count() - 1;
    tracker_.reset();
  }

  sim_ = std::make_unique<md::Simulation>(std::move(topology),
                                          std::move(state), config_.dt,
                                          thermostat);
  steps_ = 0;
  done_ = false;
  if (tracker_) tracker_->update(com_local());
  return observe();
}

Vec3 TaskEnv::com_local() const {
  if (methane_.empty()) return {};
  return frame_.to_local(center_of_mass(sim_->topology(), methane_,
                                        sim_->state().positions));
}

Observation TaskEnv::observe() const {
  if (!sim_) throw LifecycleError("environment has not been reset");
  const auto& s = sim_->state();
  if (config_.task == md::TaskId::kNanotube) {
    return nanotube_observation(frame_, sim_->topology(), s.positions,
                                s.velocities);
  }
  return alanine_observation(s.positions, s.velocities);
}

StepResult TaskEnv::step(const Vec3& action) {
  if (!sim_) throw LifecycleError("step() before reset()");
  if (done_) throw LifecycleError("step() after the episode ended");
  if (!is_finite(action)) throw PolicyOutputError("non-finite action");

  const Vec3 world = config_.task == md::TaskId::kNanotube
                         ? frame_.to_world_dir(action)
                         : action;
  const Vec3 applied = md::clamp_magnitude(world, config_.max_force);
  sim_->set_applied({{controlled_atom_, applied}});
  sim_->step(config_.n_substeps);
  ++steps_;

  StepResult out;
  out.obs = observe();
  if (tracker_) tracker_->update(com_local());
  out.info.success = success();
  out.info.steps = steps_;
  out.info.applied_force = applied;
  done_ = steps_ >= config_.max_steps ||
          (config_.terminate_on_success && out.info.success);
  out.done = done_;
  return out;
}

}  // namespace demoforge::env
