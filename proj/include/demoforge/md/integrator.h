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

#ifndef DEMOFORGE_MD_INTEGRATOR_H_
#define DEMOFORGE_MD_INTEGRATOR_H_

#include <cstdint>
#include <span>
#include <vector>

#include "demoforge/md/forcefield.h"
#include "demoforge/md/topology.h"

namespace demoforge::md {

inline constexpr double kDefaultTimestep = 0.001;  // ps

struct Thermostat {
  enum class Kind { kNone, kLangevin };
  Kind kind = Kind::kNone;
  double gamma = 1.0;          // 1/ps
  double temperature = 300.0;  // K
  uint64_t seed = 0;

  static Thermostat none() { return {}; }
  static Thermostat langevin(double gamma, double temperature, uint64_t seed) {
    return {Kind::kLangevin, gamma, temperature, seed};
  }
};

// One integrator step. Without a thermostat this is plain velocity Verlet;
// with Langevin it is the BAOAB splitting whose noise is keyed by
// (seed, step, atom, component). Throws DivergenceError on non-finite output.
SimState integrate_step(const Topology& topology, const SimState& state,
                        std::span<const InteractiveForce> interactions,
                        double dt, const Thermostat& thermostat,
                        std::span<const AppliedForce> applied = {});

// A running simulation that caches forces between steps. Stepping here is
// bit-identical to chaining integrate_step().
class Simulation {
 public:
  Simulation(Topology topology, SimState state, double dt = kDefaultTimestep,
             Thermostat thermostat = Thermostat::none());

  const Topology& topology() const { return field_.topology(); }
  const ForceField& force_field() const { return field_; }
  const SimState& state() const { return state_; }
  double dt() const { return dt_; }
  const Thermostat& thermostat() const { return thermostat_; }

  void set_state(SimState state);
  void set_thermostat(const Thermostat& thermostat) { thermostat_ = thermostat; }
  void set_interactions(std::vector<InteractiveForce> interactions);
  void set_applied(std::vector<AppliedForce> applied);
  const std::vector<InteractiveForce>& interactions() const {
    return interactions_;
  }

  void step(int n = 1);

  // Forces at the current positions under the current inputs.
  const ForceResult& forces();
  Energies energies();

 private:
  void refresh_forces();

  ForceField field_;
  SimState state_;
  double dt_;
  Thermostat thermostat_;
  std::vector<InteractiveForce> interactions_;
  std::vector<AppliedForce> applied_;
  ForceResult forces_;
  bool forces_valid_ = false;
};

// Shared by integrate_step() and Simulation. `forces` holds the forces at the
// current positions on entry and at the new positions on return.
void advance(const ForceField& field, SimState& state,
             std::span<const InteractiveForce> interactions,
             std::span<const AppliedForce> applied, double dt,
             const Thermostat& thermostat, ForceResult& forces);

}  // namespace demoforge::md

#endif  // DEMOFORGE_MD_INTEGRATOR_H_
