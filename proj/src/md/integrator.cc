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

#include "demoforge/md/integrator.h"

#include <cmath>
#include <string>

#include "demoforge/common/error.h"
#include "demoforge/common/random.h"

namespace demoforge::md {

void advance(const ForceField& field, SimState& state,
             std::span<const InteractiveForce> interactions,
             std::span<const AppliedForce> applied, double dt,
             const Thermostat& thermostat, ForceResult& forces) {
  if (!(dt > 0.0)) throw InvalidArgumentError("dt must be positive");
  const auto& masses = field.topology().masses;
  const size_t n = state.positions.size();
  auto& x = state.positions;
  auto& v = state.velocities;

  for (size_t i = 0; i < n; ++i) v[i] += forces.forces[i] * (0.5 * dt / masses[i]);

  if (thermostat.kind == Thermostat::Kind::kNone) {
    for (size_t i = 0; i < n; ++i) x[i] += v[i] * dt;
  } else {
    for (size_t i = 0; i < n; ++i) x[i] += v[i] * (0.5 * dt);
    const double c1 = std::exp(-thermostat.gamma * dt);
    const double c2 = std::sqrt(1.0 - c1 * c1);
    const double kt = kBoltzmann * thermostat.temperature;
    const auto step = static_cast<uint64_t>(state.step);
    for (size_t i = 0; i < n; ++i) {
      const double s = c2 * std::sqrt(kt / masses[i]);
      for (int d = 0; d < 3; ++d) {
        const double xi = CounterRng::normal(thermostat.seed, step, i, d);
        v[i][d] = c1 * v[i][d] + s * xi;
      }
    }
    for (size_t i = 0; i < n; ++i) x[i] += v[i] * (0.5 * dt);
  }

  for (size_t i = 0; i < n; ++i) {
    if (!is_finite(x[i])) {
      throw DivergenceError("non-finite position for atom " +
                            std::to_string(i) + " at step " +
                            std::to_string(state.step + 1) +
                            "; reduce dt or clamp forces");
    }
  }

  field.compute(x, interactions, applied, forces);
  for (size_t i = 0; i < n; ++i) v[i] += forces.forces[i] * (0.5 * dt / masses[i]);

  state.step += 1;
  state.time = static_cast<double>(state.step) * dt;
}

SimState integrate_step(const Topology& topology, const SimState& state,
                        std::span<const InteractiveForce> interactions,
                        double dt, const Thermostat& thermostat,
                        std::span<const AppliedForce> applied) {
  const ForceField field(topology);
  ForceResult forces;
  field.compute(state.positions, interactions, applied, forces);
  SimState next = state;
  advance(field, next, interactions, applied, dt, thermostat, forces);
  return next;
}

Simulation::Simulation(Topology topology, SimState state, double dt,
                       Thermostat thermostat)
    : field_(std::move(topology)),
      state_(std::move(state)),
      dt_(dt),
      thermostat_(thermostat) {
  if (!(dt_ > 0.0)) throw InvalidArgumentError("dt must be positive");
  if (static_cast<int>(state_.positions.size()) != field_.topology().atom_count() ||
      state_.velocities.size() != state_.positions.size()) {
    throw DimensionError("state does not match topology");
  }
}

void Simulation::set_state(SimState state) {
  state_ = std::move(state);
  forces_valid_ = false;
}

void Simulation::set_interactions(std::vector<InteractiveForce> interactions) {
  for (const auto& i : interactions) i.validate(field_.topology().atom_count());
  interactions_ = std::move(interactions);
  forces_valid_ = false;
}

void Simulation::set_applied(std::vector<AppliedForce> applied) {
  applied_ = std::move(applied);
  forces_valid_ = false;
}

void Simulation::refresh_forces() {
  if (!forces_valid_) {
    field_.compute(state_.positions, interactions_, applied_, forces_);
    forces_valid_ = true;
  }
}

void Simulation::step(int n) {
  for (int k = 0; k < n; ++k) {
    refresh_forces();
    forces_valid_ = false;
    advance(field_, state_, interactions_, applied_, dt_, thermostat_, forces_);
    forces_valid_ = true;
  }
}

const ForceResult& Simulation::forces() {
  refresh_forces();
  return forces_;
}

Energies Simulation::energies() {
  refresh_forces();
  return {kinetic_energy(field_.topology(), state_.velocities),
          forces_.potential};
}

}  // namespace demoforge::md
