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

#ifndef DEMOFORGE_ENV_TASK_ENV_H_
#define DEMOFORGE_ENV_TASK_ENV_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "demoforge/common/vec3.h"
#include "demoforge/md/builders.h"
#include "demoforge/md/integrator.h"
#include "demoforge/md/topology.h"

namespace demoforge::env {

using Observation = std::vector<double>;

inline constexpr int kNanotubeObsDim = 9;
inline constexpr int kAlanineObsDim = 12;
inline constexpr int kActionDim = 3;

struct TaskConfig {
  md::TaskId task = md::TaskId::kNanotube;
  int n_substeps = 10;      // integrator steps per action
  int max_steps = 2000;     // control steps per episode
  double jitter = 0.1;      // nm, half-width of the start offset per axis
  double margin = 0.1;      // nm, success band beyond entrance and exit
  double max_force = md::kDefaultMaxForce;
  double dt = md::kDefaultTimestep;
  double gamma = 1.0;           // 1/ps
  double temperature = 300.0;   // K
  // When false an episode always runs to max_steps; success is still
  // tracked.
  bool terminate_on_success = true;
  md::BuildOptions build;

  int obs_dim() const {
    return task == md::TaskId::kNanotube ? kNanotubeObsDim : kAlanineObsDim;
  }
};

// Orthonormal frame attached to the nanotube: origin at the centroid of the
// restraint anchors, ez from the first ring towards the last, ex towards the
// first anchor. Axial bounds and radius are measured in this frame.
struct TubeFrame {
  Vec3 origin;
  Vec3 ex{1, 0, 0};
  Vec3 ey{0, 1, 0};
  Vec3 ez{0, 0, 1};
  double entrance = 0.0;  // axial coordinate of the first ring
  double exit = 0.0;      // axial coordinate of the last ring
  double radius = 0.0;

  Vec3 to_local(const Vec3& p) const { return to_local_dir(p - origin); }
  Vec3 to_local_dir(const Vec3& v) const {
    return {dot(v, ex), dot(v, ey), dot(v, ez)};
  }
  Vec3 to_world(const Vec3& p) const { return origin + to_world_dir(p); }
  Vec3 to_world_dir(const Vec3& v) const {
    return ex * v.x + ey * v.y + ez * v.z;
  }
};

// Requires the nanotube topology (carbons restrained ring by ring).
TubeFrame tube_frame(const md::Topology& topology, int carbons_per_ring);

// Indices of the methane atoms (C61 first).
std::vector<int> methane_atoms(const md::Topology& topology);

Vec3 center_of_mass(const md::Topology& topology, std::span<const int> atoms,
                    std::span<const Vec3> values);

// [com position (3), com velocity (3), unit vector to entrance centre (3)],
// all in the tube frame.
Observation nanotube_observation(const TubeFrame& frame,
                                 const md::Topology& topology,
                                 std::span<const Vec3> positions,
                                 std::span<const Vec3> velocities);

// [first bead pos, last bead pos, first bead vel, last bead vel], relative
// to the chain centroid and its velocity.
Observation alanine_observation(std::span<const Vec3> positions,
                                std::span<const Vec3> velocities);

// Incremental form of the threading predicate. Success latches once the
// COM has gone from below entrance - margin to above exit + margin with
// every in-tube sample strictly inside the radius.
class SuccessTracker {
 public:
  SuccessTracker(double entrance, double exit, double radius, double margin)
      : entrance_(entrance), exit_(exit), radius_(radius), margin_(margin) {}

  // `local` is the COM in the tube frame.
  bool update(const Vec3& local);
  bool success() const { return success_; }
  bool armed() const { return armed_; }

 private:
  double entrance_;
  double exit_;
  double radius_;
  double margin_;
  bool armed_ = false;
  bool success_ = false;
};

// Batch form over a history of tube-frame COM samples.
bool is_success(std::span<const Vec3> local_history, const TubeFrame& frame,
                double margin = 0.1);

struct StepInfo {
  bool success = false;
  int steps = 0;        // control steps taken so far
  Vec3 applied_force;   // world frame, after clamping
};

struct StepResult {
  Observation obs;
  bool done = false;
  StepInfo info;
};

// Reset/step wrapper for one task. Actions are forces on the controlled atom
// (C61 or the last chain bead), expressed in the tube frame for the
// nanotube and in the world frame for the chain.
class TaskEnv {
 public:
  explicit TaskEnv(TaskConfig config = {});

  const TaskConfig& config() const { return config_; }

  Observation reset(uint64_t seed);
  // LifecycleError before reset() or after the episode ended.
  StepResult step(const Vec3& action);

  Observation observe() const;
  bool done() const { return done_; }
  bool success() const { return tracker_ && tracker_->success(); }
  int steps() const { return steps_; }
  uint64_t seed() const { return seed_; }

  const md::Simulation& simulation() const { return *sim_; }
  md::Simulation& simulation() { return *sim_; }
  const TubeFrame& frame() const { return frame_; }
  int controlled_atom() const { return controlled_atom_; }
  // Methane COM in the tube frame (nanotube only).
  Vec3 com_local() const;

 private:
  TaskConfig config_;
  std::unique_ptr<md::Simulation> sim_;
  TubeFrame frame_;
  std::vector<int> methane_;
  std::unique_ptr<SuccessTracker> tracker_;
  int controlled_atom_ = 0;
  int steps_ = 0;
  uint64_t seed_ = 0;
  bool done_ = true;
};

}  // namespace demoforge::env

#endif  // DEMOFORGE_ENV_TASK_ENV_H_
