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

#ifndef DEMOFORGE_MD_FORCEFIELD_H_
#define DEMOFORGE_MD_FORCEFIELD_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "demoforge/common/vec3.h"
#include "demoforge/md/topology.h"

namespace demoforge::md {

// Interacting atoms closer than this raise SingularityError.
inline constexpr double kMinSeparation = 1e-6;  // nm

// Per-atom clamp on interactive and applied forces.
inline constexpr double kDefaultMaxForce = 1e3;  // kJ/mol/nm

enum class InteractionMode { kConstantPull, kGaussianWell };

std::string_view to_string(InteractionMode mode);
// Accepts "constant-pull" and "gaussian-well"; throws InvalidArgumentError.
InteractionMode parse_interaction_mode(std::string_view name);

// A user grabbing a set of atoms with a controller.
struct InteractiveForce {
  std::string id;
  std::vector<int> atom_indices;
  Vec3 controller_position;
  double scale = 1.0;
  InteractionMode mode = InteractionMode::kGaussianWell;
  double width = 0.3;       // gaussian-well w, nm
  double depth = 100.0;     // gaussian-well A, kJ/mol
  double unit_force = 1.0;  // constant-pull F_unit, kJ/mol/nm
  double max_force = kDefaultMaxForce;

  // Throws InvalidArgumentError; atom_count < 0 skips the index check.
  void validate(int atom_count = -1) const;

  friend bool operator==(const InteractiveForce&,
                         const InteractiveForce&) = default;
};

// A fixed external force on one atom (agent actions).
struct AppliedForce {
  int atom = 0;
  Vec3 force;
};

struct ForceResult {
  std::vector<Vec3> forces;       // internal + user, kJ/mol/nm
  double potential = 0.0;         // internal potential, kJ/mol
  std::vector<Vec3> user_forces;  // interactive and applied contribution only
};

struct Energies {
  double kinetic = 0.0;
  double potential = 0.0;
  double total() const { return kinetic + potential; }
};

// Force field over a fixed topology. The non-bonded pair list is built once.
class ForceField {
 public:
  explicit ForceField(Topology topology);

  const Topology& topology() const { return topology_; }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

  void compute(std::span<const Vec3> positions,
               std::span<const InteractiveForce> interactions,
               std::span<const AppliedForce> applied, ForceResult& out) const;

  ForceResult compute(std::span<const Vec3> positions,
                      std::span<const InteractiveForce> interactions = {},
                      std::span<const AppliedForce> applied = {}) const;

  // Internal potential only; same code path as compute().
  double potential(std::span<const Vec3> positions) const;

 private:
  // Accumulates internal forces into `forces` and returns the potential.
  double internal(std::span<const Vec3> positions,
                  std::span<Vec3> forces) const;

  Topology topology_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<double> pair_sigma_;
  std::vector<double> pair_epsilon_;
};

ForceResult compute_forces(const Topology& topology,
                           std::span<const Vec3> positions,
                           std::span<const InteractiveForce> interactions = {},
                           std::span<const AppliedForce> applied = {});

// Per-atom forces of a single interaction (zero for unselected atoms).
std::vector<Vec3> interactive_force_eval(const InteractiveForce& interaction,
                                         std::span<const Vec3> positions);

// Well potential -scale*A*exp(-|r-c|^2/2w^2) felt by one atom at `r`.
double gaussian_well_potential(const InteractiveForce& interaction,
                               const Vec3& r);

Vec3 clamp_magnitude(const Vec3& f, double max_norm);

double kinetic_energy(const Topology& topology,
                      std::span<const Vec3> velocities);

Energies total_energy(const Topology& topology, const SimState& state,
                      std::span<const InteractiveForce> interactions = {});

}  // namespace demoforge::md

#endif  // DEMOFORGE_MD_FORCEFIELD_H_
