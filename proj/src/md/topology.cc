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

#include "demoforge/md/topology.h"

#include <cmath>
#include <string>
#include <unordered_set>

#include "demoforge/common/error.h"

namespace demoforge::md {

std::string_view to_string(TaskId task) {
  switch (task) {
    case TaskId::kNanotube:
      return "nanotube";
    case TaskId::kAlanine17:
      return "alanine17";
  }
  return "unknown";
}

TaskId parse_task_id(std::string_view name) {
  if (name == "nanotube") return TaskId::kNanotube;
  if (name == "alanine17") return TaskId::kAlanine17;
  throw UnsupportedTaskError("unsupported task '" + std::string(name) + "'");
}

void Topology::exclude(int i, int j) {
  if (i > j) std::swap(i, j);
  nonbonded_exclusions.emplace(i, j);
}

bool Topology::excluded(int i, int j) const {
  if (i > j) std::swap(i, j);
  return nonbonded_exclusions.contains({i, j});
}

int Topology::index_of(std::string_view name) const {
  for (int i = 0; i < atom_count(); ++i) {
    if (atom_names[i] == name) return i;
  }
  throw LookupError("no atom named '" + std::string(name) + "'");
}

std::vector<std::pair<int, int>> Topology::nonbonded_pairs() const {
  std::vector<std::pair<int, int>> pairs;
  const int n = atom_count();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!nonbonded_exclusions.contains({i, j})) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

void Topology::validate() const {
  const int n = atom_count();
  auto fail = [](const std::string& msg) { throw InvalidArgumentError(msg); };
  auto in_range = [n](int i) { return i >= 0 && i < n; };

  if (static_cast<int>(masses.size()) != n ||
      static_cast<int>(lj_params.size()) != n) {
    fail("per-atom arrays disagree with atom count");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : atom_names) {
    if (!seen.insert(name).second) fail("duplicate atom name " + name);
  }
  for (double m : masses) {
    if (!(m > 0.0)) fail("non-positive mass");
  }
  for (const auto& p : lj_params) {
    if (!(p.epsilon >= 0.0) || !(p.sigma > 0.0)) fail("invalid LJ parameters");
  }
  for (const auto& b : bonds) {
    if (!in_range(b.i) || !in_range(b.j) || b.i == b.j) fail("bad bond index");
    if (!(b.k >= 0.0)) fail("negative bond constant");
    if (!excluded(b.i, b.j)) fail("bonded pair missing from exclusions");
  }
  for (const auto& a : angles) {
    if (!in_range(a.i) || !in_range(a.j) || !in_range(a.k)) {
      fail("bad angle index");
    }
    if (!(a.k_theta >= 0.0)) fail("negative angle constant");
  }
  for (const auto& r : restraints) {
    if (!in_range(r.atom)) fail("bad restraint index");
    if (!(r.k >= 0.0)) fail("negative restraint constant");
    if (!is_finite(r.anchor)) fail("non-finite restraint anchor");
  }
  for (const auto& [i, j] : nonbonded_exclusions) {
    if (!in_range(i) || !in_range(j)) fail("bad exclusion index");
  }
}

}  // namespace demoforge::md
