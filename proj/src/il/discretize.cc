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

#include "demoforge/il/discretize.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "demoforge/common/error.h"

namespace demoforge::il {

void Discretizer::validate() const {
  if (n_axial < 2 || n_radial < 2) {
    throw InvalidArgumentError("grid needs at least 2 cells per axis");
  }
  if (!(axial_max > axial_min) || !(radial_max > 0.0)) {
    throw InvalidArgumentError("grid bounds are empty");
  }
}

int Discretizer::axial_index(const Vec3& local) const {
  const double f = (local.z - axial_min) / (axial_max - axial_min);
  return std::clamp(static_cast<int>(std::floor(f * n_axial)), 0, n_axial - 1);
}

int Discretizer::radial_index(const Vec3& local) const {
  const double f = std::hypot(local.x, local.y) / radial_max;
  return std::clamp(static_cast<int>(std::floor(f * n_radial)), 0,
                    n_radial - 1);
}

Discretizer default_discretizer(const env::TubeFrame& frame, int n_axial,
                                int n_radial) {
  Discretizer d;
  d.n_axial = n_axial;
  d.n_radial = n_radial;
  d.axial_min = frame.entrance - 0.8;
  d.axial_max = frame.exit + 0.5;
  d.radial_max = frame.radius + 0.1;
  d.validate();
  return d;
}

int infer_grid_action(const Discretizer& grid, int from_cell, int to_cell) {
  const int da = to_cell / grid.n_radial - from_cell / grid.n_radial;
  const int dr = to_cell % grid.n_radial - from_cell % grid.n_radial;
  if (da == 0 && dr == 0) return kStay;
  if (std::abs(da) >= std::abs(dr)) return da > 0 ? kAxialUp : kAxialDown;
  return dr > 0 ? kRadialOut : kRadialIn;
}

DiscreteTask discretize_task(std::span<const env::Trajectory> trajectories,
                             const Discretizer& grid, double gamma) {
  grid.validate();
  if (trajectories.empty()) throw InvalidArgumentError("no trajectories");
  DiscreteTask out;
  out.grid = grid;
  const int S = grid.n_cells();
  const int A = kGridActions;
  std::vector<double> counts(static_cast<size_t>(S) * A * S, 0.0);
  for (const auto& tr : trajectories) {
    if (tr.com_path.size() < 2) continue;
    DiscreteTrajectory dt;
    for (size_t i = 0; i + 1 < tr.com_path.size(); ++i) {
      const int s = grid.cell(tr.com_path[i]);
      const int s2 = grid.cell(tr.com_path[i + 1]);
      const int a = infer_grid_action(grid, s, s2);
      dt.emplace_back(s, a);
      counts[(static_cast<size_t>(s) * A + a) * S + s2] += 1.0;
    }
    out.trajectories.push_back(std::move(dt));
  }
  if (out.trajectories.empty()) {
    throw InvalidArgumentError("trajectories have no transitions");
  }
  out.mdp.n_states = S;
  out.mdp.n_actions = A;
  out.mdp.gamma = gamma;
  out.mdp.transitions.resize(counts.size());
  for (size_t row = 0; row < static_cast<size_t>(S) * A; ++row) {
    double total = 0.0;
    for (int s2 = 0; s2 < S; ++s2) total += counts[row * S + s2] + 0.01;
    for (int s2 = 0; s2 < S; ++s2) {
      out.mdp.transitions[row * S + s2] = (counts[row * S + s2] + 0.01) / total;
    }
  }
  return out;
}

int action_bin(const Vec3& action) {
  int axis = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(action[k]) > std::abs(action[axis])) axis = k;
  }
  if (action[axis] == 0.0) return 6;
  return 2 * axis + (action[axis] > 0.0 ? 0 : 1);
}

namespace {

void normalize(OccupancyEstimate& o) {
  if (o.samples == 0) throw InvalidArgumentError("no samples for occupancy");
  for (auto& p : o.probs) p /= static_cast<double>(o.samples);
}

}  // namespace

OccupancyEstimate occupancy_estimate(
    std::span<const env::Trajectory> trajectories, const Discretizer& grid) {
  OccupancyEstimate o;
  o.n_cells = grid.n_cells();
  o.probs.assign(static_cast<size_t>(o.n_cells) * o.n_bins, 0.0);
  for (const auto& tr : trajectories) {
    for (size_t i = 0; i < tr.size(); ++i) {
      const auto& obs = tr.observations[i];
      const int c = grid.cell({obs[0], obs[1], obs[2]});
      o.probs[c * o.n_bins + action_bin(tr.actions[i])] += 1.0;
      ++o.samples;
    }
  }
  normalize(o);
  return o;
}

OccupancyEstimate occupancy_estimate(const ExpertDataset& data,
                                     const Discretizer& grid) {
  OccupancyEstimate o;
  o.n_cells = grid.n_cells();
  o.probs.assign(static_cast<size_t>(o.n_cells) * o.n_bins, 0.0);
  for (size_t i = 0; i < data.size(); ++i) {
    const auto& obs = data.observations[i];
    const auto& a = data.actions[i];
    const int c = grid.cell({obs[0], obs[1], obs[2]});
    o.probs[c * o.n_bins + action_bin({a[0], a[1], a[2]})] += 1.0;
    ++o.samples;
  }
  normalize(o);
  return o;
}

OccupancyEstimate occupancy_estimate(
    std::span<const DiscreteTrajectory> trajectories, int n_states,
    int n_actions) {
  OccupancyEstimate o;
  o.n_cells = n_states;
  o.n_bins = n_actions;
  o.probs.assign(static_cast<size_t>(n_states) * n_actions, 0.0);
  for (const auto& tr : trajectories) {
    for (const auto& [s, a] : tr) {
      o.probs.at(static_cast<size_t>(s) * n_actions + a) += 1.0;
      ++o.samples;
    }
  }
  normalize(o);
  return o;
}

double occupancy_gap(const OccupancyEstimate& a, const OccupancyEstimate& b) {
  if (a.probs.size() != b.probs.size()) {
    throw DimensionError("occupancy estimates have different supports");
  }
  double gap = 0.0;
  for (size_t i = 0; i < a.probs.size(); ++i) {
    gap += std::abs(a.probs[i] - b.probs[i]);
  }
  return gap;
}

}  // namespace demoforge::il
