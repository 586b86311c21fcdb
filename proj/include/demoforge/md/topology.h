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

#ifndef DEMOFORGE_MD_TOPOLOGY_H_
#define DEMOFORGE_MD_TOPOLOGY_H_

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "demoforge/common/vec3.h"

namespace demoforge::md {

// MD units throughout: nm, ps, amu, kJ/mol. One amu nm^2/ps^2 is one kJ/mol.
inline constexpr double kBoltzmann = 0.0083144626;  // kJ/mol/K

struct Bond {
  int i = 0;
  int j = 0;
  double k = 0.0;   // kJ/mol/nm^2
  double r0 = 0.0;  // nm

  friend bool operator==(const Bond&, const Bond&) = default;
};

// Harmonic angle with vertex at j.
struct Angle {
  int i = 0;
  int j = 0;
  int k = 0;
  double k_theta = 0.0;  // kJ/mol/rad^2
  double theta0 = 0.0;   // rad

  friend bool operator==(const Angle&, const Angle&) = default;
};

struct LjParams {
  double epsilon = 0.0;  // kJ/mol
  double sigma = 0.0;    // nm

  friend bool operator==(const LjParams&, const LjParams&) = default;
};

// Harmonic tether of one atom to a fixed anchor point.
struct Restraint {
  int atom = 0;
  Vec3 anchor;
  double k = 0.0;  // kJ/mol/nm^2

  friend bool operator==(const Restraint&, const Restraint&) = default;
};

enum class NonbondedKind {
  kLennardJones,  // full 12-6, no cutoff
  kRepulsive,     // truncated at the minimum and shifted up by epsilon
};

enum class TaskId { kNanotube, kAlanine17 };

std::string_view to_string(TaskId task);
// Throws UnsupportedTaskError for anything but "nanotube" / "alanine17".
TaskId parse_task_id(std::string_view name);

struct Topology {
  std::vector<std::string> atom_names;
  std::vector<double> masses;  // amu
  std::vector<Bond> bonds;
  std::vector<Angle> angles;
  std::vector<LjParams> lj_params;
  std::vector<Restraint> restraints;
  // Unordered pairs stored as (min, max).
  std::set<std::pair<int, int>> nonbonded_exclusions;
  NonbondedKind nonbonded = NonbondedKind::kLennardJones;

  int atom_count() const { return static_cast<int>(atom_names.size()); }

  void exclude(int i, int j);
  bool excluded(int i, int j) const;

  // Throws LookupError if absent.
  int index_of(std::string_view name) const;

  // All non-excluded pairs (i < j), in lexicographic order.
  std::vector<std::pair<int, int>> nonbonded_pairs() const;

  // Throws InvalidArgumentError describing the first violated invariant.
  void validate() const;

  friend bool operator==(const Topology&, const Topology&) = default;
};

struct SimState {
  std::vector<Vec3> positions;   // nm
  std::vector<Vec3> velocities;  // nm/ps
  double time = 0.0;             // ps
  int64_t step = 0;

  friend bool operator==(const SimState&, const SimState&) = default;
};

}  // namespace demoforge::md

#endif  // DEMOFORGE_MD_TOPOLOGY_H_
