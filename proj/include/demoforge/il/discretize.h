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

#ifndef DEMOFORGE_IL_DISCRETIZE_H_
#define DEMOFORGE_IL_DISCRETIZE_H_

#include <span>
#include <vector>

#include "demoforge/common/vec3.h"
#include "demoforge/env/rollout.h"
#include "demoforge/env/task_env.h"
#include "demoforge/il/dataset.h"
#include "demoforge/il/mdp.h"

namespace demoforge::il {

// Grid over the tube-frame (axial, radial) coordinates of the methane COM.
// Samples outside the bounds clamp to the boundary cells.
struct Discretizer {
  int n_axial = 8;
  int n_radial = 3;
  double axial_min = -1.0;  // nm
  double axial_max = 1.0;
  double radial_max = 0.45;

  // InvalidArgumentError for a grid with fewer than 2 cells per axis.
  void validate() const;
  int n_cells() const { return n_axial * n_radial; }
  int axial_index(const Vec3& local) const;
  int radial_index(const Vec3& local) const;
  int cell(const Vec3& local) const {
    return axial_index(local) * n_radial + radial_index(local);
  }
};

// Bounds spanning the start region to just past the exit band.
Discretizer default_discretizer(const env::TubeFrame& frame, int n_axial,
                                int n_radial);

// Grid actions.
enum GridAction { kStay = 0, kAxialUp, kAxialDown, kRadialOut, kRadialIn };
inline constexpr int kGridActions = 5;

// Action from one cell to the next: the axis with the larger index change
// decides (axial on ties); no change is kStay.
int infer_grid_action(const Discretizer& grid, int from_cell, int to_cell);

struct DiscreteTask {
  Discretizer grid;
  GridMdp mdp;  // transitions estimated from counts, no reward
  std::vector<DiscreteTrajectory> trajectories;
};

// Maps each trajectory's COM path to cells, infers actions and estimates
// T(s'|s,a) from counts with additive smoothing 0.01.
DiscreteTask discretize_task(std::span<const env::Trajectory> trajectories,
                             const Discretizer& grid, double gamma = 0.9);

// Action bins for continuous forces: dominant tube-frame component and its
// sign (+x, -x, +y, -y, +z, -z); a zero force is bin 6.
inline constexpr int kActionBins = 7;
int action_bin(const Vec3& action);

// Empirical distribution over (cell, action bin) pairs.
struct OccupancyEstimate {
  int n_cells = 0;
  int n_bins = kActionBins;
  std::vector<double> probs;  // [cell * n_bins + bin]
  size_t samples = 0;
};

// Nanotube observations carry the tube-frame COM in their first block.
OccupancyEstimate occupancy_estimate(
    std::span<const env::Trajectory> trajectories, const Discretizer& grid);
OccupancyEstimate occupancy_estimate(const ExpertDataset& data,
                                     const Discretizer& grid);
OccupancyEstimate occupancy_estimate(
    std::span<const DiscreteTrajectory> trajectories, int n_states,
    int n_actions);

// Sum of absolute differences (total variation times two).
double occupancy_gap(const OccupancyEstimate& a, const OccupancyEstimate& b);

}  // namespace demoforge::il

#endif  // DEMOFORGE_IL_DISCRETIZE_H_
