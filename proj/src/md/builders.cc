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

#include "demoforge/md/builders.h"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "demoforge/common/random.h"

namespace demoforge::md {
namespace {

constexpr double kCarbonMass = 12.011;
constexpr double kHydrogenMass = 1.008;

std::pair<Topology, SimState> build_nanotube(const BuildOptions& opt,
                                             uint64_t seed) {
  const auto& g = opt.tube;
  // Carbons start displaced by the Boltzmann spread of their tethers so the
  // identical oscillators do not begin in phase.
  Rng rng(mix64(seed ^ 0x74756265ULL));
  const double spread = std::sqrt(kBoltzmann * opt.temperature / g.restraint_k);
  const auto& m = opt.methane;
  Topology topo;
  SimState state;

  for (int ring = 0; ring < g.rings; ++ring) {
    const double z = g.entrance_z() + ring * g.ring_spacing;
    const double phase = (ring % 2) * std::numbers::pi / g.carbons_per_ring;
    for (int j = 0; j < g.carbons_per_ring; ++j) {
      const double phi =
          2.0 * std::numbers::pi * j / g.carbons_per_ring + phase;
      const Vec3 site{g.radius * std::cos(phi), g.radius * std::sin(phi), z};
      const int idx = topo.atom_count();
      topo.atom_names.push_back("C" + std::to_string(idx + 1));
      topo.masses.push_back(kCarbonMass);
      topo.lj_params.push_back(g.carbon_lj);
      topo.restraints.push_back({idx, site, g.restraint_k});
      state.positions.push_back(site + Vec3{spread * rng.normal(),
                                            spread * rng.normal(),
                                            spread * rng.normal()});
    }
  }

  const int tube_atoms = topo.atom_count();
  const int c61 = tube_atoms;
  const Vec3 centre{0.0, 0.0, g.entrance_z() - m.start_offset};
  topo.atom_names.push_back("C" + std::to_string(c61 + 1));
  topo.masses.push_back(kCarbonMass);
  topo.lj_params.push_back(m.carbon_lj);
  state.positions.push_back(centre);

  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  const std::array<Vec3, 4> tetra{{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1},
                                   {-1, -1, 1}}};
  for (int h = 0; h < 4; ++h) {
    topo.atom_names.push_back("H" + std::to_string(h + 1));
    topo.masses.push_back(kHydrogenMass);
    topo.lj_params.push_back(m.hydrogen_lj);
    state.positions.push_back(centre + tetra[h] * (inv_sqrt3 * m.bond_r0));
    topo.bonds.push_back({c61, c61 + 1 + h, m.bond_k, m.bond_r0});
  }
  const double tetra_angle = std::acos(-1.0 / 3.0);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      topo.angles.push_back(
          {c61 + 1 + a, c61, c61 + 1 + b, m.angle_k, tetra_angle});
    }
  }

  // Only methane-tube pairs interact non-bonded.
  const int n = topo.atom_count();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool same_tube = i < tube_atoms && j < tube_atoms;
      const bool same_methane = i >= tube_atoms && j >= tube_atoms;
      if (same_tube || same_methane) topo.exclude(i, j);
    }
  }
  topo.nonbonded = NonbondedKind::kLennardJones;
  return {std::move(topo), std::move(state)};
}

std::pair<Topology, SimState> build_chain(const BuildOptions& opt) {
  const auto& c = opt.chain;
  Topology topo;
  SimState state;
  // Planar zig-zag whose bond angles sit exactly at theta0.
  const double tilt = 0.5 * (std::numbers::pi - c.theta0);
  const double dx = c.bond_r0 * std::cos(tilt);
  const double dy = c.bond_r0 * std::sin(tilt);
  const double x0 = -0.5 * dx * (c.beads - 1);
  for (int i = 0; i < c.beads; ++i) {
    topo.atom_names.push_back("CA" + std::to_string(i + 1));
    topo.masses.push_back(c.bead_mass);
    topo.lj_params.push_back({c.epsilon, c.sigma});
    state.positions.push_back({x0 + i * dx, (i % 2) * dy, 0.0});
  }
  for (int i = 0; i + 1 < c.beads; ++i) {
    topo.bonds.push_back({i, i + 1, c.bond_k, c.bond_r0});
    topo.exclude(i, i + 1);
  }
  for (int i = 0; i + 2 < c.beads; ++i) {
    topo.angles.push_back({i, i + 1, i + 2, c.angle_k, c.theta0});
    topo.exclude(i, i + 2);
  }
  topo.nonbonded = NonbondedKind::kRepulsive;
  return {std::move(topo), std::move(state)};
}

}  // namespace

void draw_velocities(const Topology& topology, double temperature,
                     uint64_t seed, SimState& state) {
  Rng rng(mix64(seed ^ 0x76656c6f63697479ULL));
  state.velocities.resize(topology.atom_count());
  for (int i = 0; i < topology.atom_count(); ++i) {
    const double s = std::sqrt(kBoltzmann * temperature / topology.masses[i]);
    for (int d = 0; d < 3; ++d) state.velocities[i][d] = s * rng.normal();
  }
}

std::pair<Topology, SimState> build_system(TaskId task, uint64_t seed,
                                           const BuildOptions& options) {
  auto built = task == TaskId::kNanotube ? build_nanotube(options, seed)
                                         : build_chain(options);
  built.first.validate();
  draw_velocities(built.first, options.temperature, seed, built.second);
  built.second.time = 0.0;
  built.second.step = 0;
  return built;
}

std::pair<Topology, SimState> build_system(std::string_view task,
                                           uint64_t seed,
                                           const BuildOptions& options) {
  return build_system(parse_task_id(task), seed, options);
}

}  // namespace demoforge::md
