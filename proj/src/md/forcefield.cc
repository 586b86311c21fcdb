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

#include "demoforge/md/forcefield.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "demoforge/common/error.h"

namespace demoforge::md {
namespace {

constexpr double kMinSeparation2 = kMinSeparation * kMinSeparation;

double checked_distance2(const Vec3& d, int i, int j) {
  const double r2 = dot(d, d);
  if (!(r2 >= kMinSeparation2)) {
    throw SingularityError(i, j, std::sqrt(r2));
  }
  return r2;
}

}  // namespace

std::string_view to_string(InteractionMode mode) {
  switch (mode) {
    case InteractionMode::kConstantPull:
      return "constant-pull";
    case InteractionMode::kGaussianWell:
      return "gaussian-well";
  }
  return "unknown";
}

InteractionMode parse_interaction_mode(std::string_view name) {
  if (name == "constant-pull") return InteractionMode::kConstantPull;
  if (name == "gaussian-well") return InteractionMode::kGaussianWell;
  throw InvalidArgumentError("unknown interaction mode '" + std::string(name) +
                             "'");
}

void InteractiveForce::validate(int atom_count) const {
  if (atom_indices.empty()) {
    throw InvalidArgumentError("interaction " + id + " selects no atoms");
  }
  if (atom_count >= 0) {
    for (int a : atom_indices) {
      if (a < 0 || a >= atom_count) {
        throw InvalidArgumentError("interaction " + id +
                                   " atom index out of range");
      }
    }
  }
  if (!std::isfinite(scale) || scale < 0.0) {
    throw InvalidArgumentError("interaction " + id + " has invalid scale");
  }
  if (!is_finite(controller_position)) {
    throw InvalidArgumentError("interaction " + id +
                               " has non-finite position");
  }
  if (mode == InteractionMode::kGaussianWell && !(width > 0.0)) {
    throw InvalidArgumentError("interaction " + id + " has width <= 0");
  }
}

Vec3 clamp_magnitude(const Vec3& f, double max_norm) {
  const double n = norm(f);
  if (n > max_norm) return f * (max_norm / n);
  return f;
}

double gaussian_well_potential(const InteractiveForce& interaction,
                               const Vec3& r) {
  const Vec3 d = r - interaction.controller_position;
  const double w2 = interaction.width * interaction.width;
  return -interaction.scale * interaction.depth *
         std::exp(-dot(d, d) / (2.0 * w2));
}

std::vector<Vec3> interactive_force_eval(const InteractiveForce& interaction,
                                         std::span<const Vec3> positions) {
  std::vector<Vec3> out(positions.size());
  const Vec3& c = interaction.controller_position;
  for (int a : interaction.atom_indices) {
    const Vec3 d = positions[a] - c;
    Vec3 f;
    if (interaction.mode == InteractionMode::kConstantPull) {
      const double dist = norm(d);
      if (dist > 0.0) {
        f = d * (-interaction.scale * interaction.unit_force / dist);
      }
    } else {
      const double w2 = interaction.width * interaction.width;
      const double e = std::exp(-dot(d, d) / (2.0 * w2));
      f = d * (-interaction.scale * interaction.depth * e / w2);
    }
    out[a] += f;
  }
  for (int a : interaction.atom_indices) {
    out[a] = clamp_magnitude(out[a], interaction.max_force);
  }
  return out;
}

ForceField::ForceField(Topology topology)
    : topology_(std::move(topology)), pairs_(topology_.nonbonded_pairs()) {
  topology_.validate();
  pair_sigma_.reserve(pairs_.size());
  pair_epsilon_.reserve(pairs_.size());
  for (const auto& [i, j] : pairs_) {
    const auto& a = topology_.lj_params[i];
    const auto& b = topology_.lj_params[j];
    pair_sigma_.push_back(0.5 * (a.sigma + b.sigma));
    pair_epsilon_.push_back(std::sqrt(a.epsilon * b.epsilon));
  }
}

double ForceField::internal(std::span<const Vec3> x,
                            std::span<Vec3> f) const {
  double u = 0.0;

  for (const auto& b : topology_.bonds) {
    const Vec3 d = x[b.i] - x[b.j];
    const double r = std::sqrt(checked_distance2(d, b.i, b.j));
    const double dr = r - b.r0;
    u += 0.5 * b.k * dr * dr;
    const Vec3 fi = d * (-b.k * dr / r);
    f[b.i] += fi;
    f[b.j] -= fi;
  }

  for (const auto& a : topology_.angles) {
    const Vec3 r1 = x[a.i] - x[a.j];
    const Vec3 r2 = x[a.k] - x[a.j];
    const double n1 = std::sqrt(checked_distance2(r1, a.i, a.j));
    const double n2 = std::sqrt(checked_distance2(r2, a.k, a.j));
    const double c = std::clamp(dot(r1, r2) / (n1 * n2), -1.0, 1.0);
    const double theta = std::acos(c);
    const double dtheta = theta - a.theta0;
    u += 0.5 * a.k_theta * dtheta * dtheta;
    const double s = std::max(std::sqrt(1.0 - c * c), 1e-12);
    // dU/dcos = -k dtheta / sin(theta)
    const double g = a.k_theta * dtheta / s;
    const Vec3 dc_dxi = r2 / (n1 * n2) - r1 * (c / (n1 * n1));
    const Vec3 dc_dxk = r1 / (n1 * n2) - r2 * (c / (n2 * n2));
    const Vec3 fi = dc_dxi * g;
    const Vec3 fk = dc_dxk * g;
    f[a.i] += fi;
    f[a.k] += fk;
    f[a.j] -= fi + fk;
  }

  const bool repulsive = topology_.nonbonded == NonbondedKind::kRepulsive;
  for (size_t p = 0; p < pairs_.size(); ++p) {
    const auto [i, j] = pairs_[p];
    const double eps = pair_epsilon_[p];
    if (eps == 0.0) continue;
    const double sigma = pair_sigma_[p];
    const Vec3 d = x[i] - x[j];
    const double r2 = checked_distance2(d, i, j);
    const double s2 = sigma * sigma / r2;
    if (repulsive && s2 < 0.7937005259840998) continue;  // r > 2^(1/6) sigma
    const double s6 = s2 * s2 * s2;
    u += 4.0 * eps * (s6 * s6 - s6) + (repulsive ? eps : 0.0);
    const Vec3 fi = d * (24.0 * eps * (2.0 * s6 * s6 - s6) / r2);
    f[i] += fi;
    f[j] -= fi;
  }

  for (const auto& r : topology_.restraints) {
    const Vec3 d = x[r.atom] - r.anchor;
    u += 0.5 * r.k * dot(d, d);
    f[r.atom] -= d * r.k;
  }
  return u;
}

void ForceField::compute(std::span<const Vec3> positions,
                         std::span<const InteractiveForce> interactions,
                         std::span<const AppliedForce> applied,
                         ForceResult& out) const {
  const size_t n = positions.size();
  if (static_cast<int>(n) != topology_.atom_count()) {
    throw DimensionError("position count does not match topology");
  }
  out.forces.assign(n, Vec3{});
  out.user_forces.assign(n, Vec3{});
  out.potential = internal(positions, out.forces);

  for (const auto& interaction : interactions) {
    interaction.validate(static_cast<int>(n));
    const auto f = interactive_force_eval(interaction, positions);
    for (size_t a = 0; a < n; ++a) out.user_forces[a] += f[a];
  }
  for (const auto& a : applied) {
    if (a.atom < 0 || a.atom >= static_cast<int>(n)) {
      throw InvalidArgumentError("applied force atom index out of range");
    }
    out.user_forces[a.atom] += a.force;
  }
  if (!interactions.empty() || !applied.empty()) {
    for (size_t a = 0; a < n; ++a) out.forces[a] += out.user_forces[a];
  }
}

ForceResult ForceField::compute(std::span<const Vec3> positions,
                                std::span<const InteractiveForce> interactions,
                                std::span<const AppliedForce> applied) const {
  ForceResult out;
  compute(positions, interactions, applied, out);
  return out;
}

double ForceField::potential(std::span<const Vec3> positions) const {
  std::vector<Vec3> scratch(positions.size());
  return internal(positions, scratch);
}

ForceResult compute_forces(const Topology& topology,
                           std::span<const Vec3> positions,
                           std::span<const InteractiveForce> interactions,
                           std::span<const AppliedForce> applied) {
  return ForceField(topology).compute(positions, interactions, applied);
}

double kinetic_energy(const Topology& topology,
                      std::span<const Vec3> velocities) {
  double k = 0.0;
  for (size_t i = 0; i < velocities.size(); ++i) {
    k += 0.5 * topology.masses[i] * dot(velocities[i], velocities[i]);
  }
  return k;
}

Energies total_energy(const Topology& topology, const SimState& state,
                      std::span<const InteractiveForce> interactions) {
  Energies e;
  e.kinetic = kinetic_energy(topology, state.velocities);
  e.potential = compute_forces(topology, state.positions, interactions).potential;
  return e;
}

}  // namespace demoforge::md
