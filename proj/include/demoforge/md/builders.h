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

#ifndef DEMOFORGE_MD_BUILDERS_H_
#define DEMOFORGE_MD_BUILDERS_H_

#include <cstdint>
#include <string_view>
#include <utility>

#include "demoforge/md/topology.h"

namespace demoforge::md {

// Procedural nanotube: stacked, staggered rings of carbons along +z, centred
// on the origin, each carbon tethered to its lattice site.
struct NanotubeGeometry {
  int rings = 6;
  int carbons_per_ring = 10;
  double radius = 0.35;        // nm
  double ring_spacing = 0.123;  // nm
  double restraint_k = 5e3;    // kJ/mol/nm^2
  LjParams carbon_lj{0.36, 0.32};

  int carbon_count() const { return rings * carbons_per_ring; }
  double length() const { return (rings - 1) * ring_spacing; }
  double entrance_z() const { return -0.5 * length(); }
  double exit_z() const { return 0.5 * length(); }
};

struct MethaneModel {
  double bond_k = 3.0e3;   // kJ/mol/nm^2
  double bond_r0 = 0.109;  // nm
  double angle_k = 30.0;   // kJ/mol/rad^2
  LjParams carbon_lj{0.36, 0.32};
  LjParams hydrogen_lj{0.0, 0.2};  // united-atom: carbon carries the LJ site
  // Axial distance of the initial methane carbon before the entrance plane.
  double start_offset = 0.5;  // nm
};

struct ChainModel {
  int beads = 17;
  double bead_mass = 71.08;     // amu
  double bond_k = 1.0e4;        // kJ/mol/nm^2
  double bond_r0 = 0.38;        // nm
  double angle_k = 50.0;        // kJ/mol/rad^2
  double theta0 = 2.0;          // rad
  double epsilon = 1.0;         // kJ/mol
  double sigma = 0.4;           // nm
};

struct BuildOptions {
  double temperature = 300.0;  // K, for Maxwell-Boltzmann velocities
  NanotubeGeometry tube;
  MethaneModel methane;
  ChainModel chain;
};

// Deterministic in (task, seed, options).
std::pair<Topology, SimState> build_system(TaskId task, uint64_t seed,
                                           const BuildOptions& options = {});
// Throws UnsupportedTaskError for unknown names.
std::pair<Topology, SimState> build_system(std::string_view task,
                                           uint64_t seed,
                                           const BuildOptions& options = {});

// Thermal velocities for every atom; a pure function of the seed.
void draw_velocities(const Topology& topology, double temperature,
                     uint64_t seed, SimState& state);

}  // namespace demoforge::md

#endif  // DEMOFORGE_MD_BUILDERS_H_
