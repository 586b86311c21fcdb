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

#include "demoforge/recording/recording.h"

#include <string>

#include "demoforge/common/error.h"

namespace demoforge::recording {

void Recording::append_frame(Frame frame) {
  if (!frames_.empty() && frame.step < frames_.back().step) {
    throw OrderingError("frame step " + std::to_string(frame.step) +
                        " precedes last recorded step " +
                        std::to_string(frames_.back().step));
  }
  if (!frames_.empty() && frame.wall_time_ms < frames_.back().wall_time_ms) {
    throw OrderingError("frame wall time goes backwards");
  }
  const auto n = static_cast<size_t>(header_.topology.atom_count());
  if (n > 0 && (frame.positions.size() != n || frame.user_forces.size() != n)) {
    throw DimensionError("frame arrays do not match topology atom count");
  }
  if (frame.user_forces.size() != frame.positions.size()) {
    throw DimensionError("frame positions and user forces differ in length");
  }
  frames_.push_back(std::move(frame));
}

void Recording::append_event(SharedStateEvent event) {
  if (!events_.empty() && event.wall_time_ms < events_.back().wall_time_ms) {
    throw OrderingError("event wall time goes backwards");
  }
  events_.push_back(std::move(event));
}

Recording append_frame(Recording rec, Frame frame) {
  rec.append_frame(std::move(frame));
  return rec;
}

std::vector<std::pair<int64_t, Vec3>> extract_atom_trajectory(
    const Recording& rec, std::string_view atom_name) {
  const int atom = rec.header().topology.index_of(atom_name);
  std::vector<std::pair<int64_t, Vec3>> out;
  out.reserve(rec.frame_count());
  for (const auto& f : rec.frames()) out.emplace_back(f.step, f.positions[atom]);
  return out;
}

std::vector<StreamRef> merged_order(const Recording& rec) {
  const auto& frames = rec.frames();
  const auto& events = rec.events();
  std::vector<StreamRef> out;
  out.reserve(frames.size() + events.size());
  size_t f = 0;
  size_t e = 0;
  while (f < frames.size() || e < events.size()) {
    const bool take_frame =
        e == events.size() ||
        (f < frames.size() &&
         frames[f].wall_time_ms <= events[e].wall_time_ms);
    if (take_frame) {
      out.push_back({StreamRef::Kind::kFrame, f, frames[f].wall_time_ms});
      ++f;
    } else {
      out.push_back({StreamRef::Kind::kEvent, e, events[e].wall_time_ms});
      ++e;
    }
  }
  return out;
}

std::vector<std::pair<size_t, size_t>> episode_frame_ranges(
    const Recording& rec) {
  std::vector<size_t> starts;
  size_t f = 0;
  for (const auto& ref : merged_order(rec)) {
    if (ref.kind == StreamRef::Kind::kFrame) {
      ++f;
    } else if (rec.events()[ref.index].key == "episode/start") {
      // Frames stamped with the event's wall time belong to the new episode.
      size_t first = f;
      while (first > 0 &&
             rec.frames()[first - 1].wall_time_ms == ref.wall_time_ms) {
        --first;
      }
      starts.push_back(first);
    }
  }
  if (starts.empty() || starts.front() != 0) starts.insert(starts.begin(), 0);
  std::vector<std::pair<size_t, size_t>> out;
  for (size_t i = 0; i < starts.size(); ++i) {
    const size_t end = i + 1 < starts.size() ? starts[i + 1] : rec.frame_count();
    if (end > starts[i]) out.emplace_back(starts[i], end);
  }
  return out;
}

nlohmann::json topology_to_json(const md::Topology& t) {
  using nlohmann::json;
  json j;
  j["atom_names"] = t.atom_names;
  j["masses"] = t.masses;
  json bonds = json::array();
  for (const auto& b : t.bonds) bonds.push_back({b.i, b.j, b.k, b.r0});
  j["bonds"] = bonds;
  json angles = json::array();
  for (const auto& a : t.angles) {
    angles.push_back({a.i, a.j, a.k, a.k_theta, a.theta0});
  }
  j["angles"] = angles;
  json lj = json::array();
  for (const auto& p : t.lj_params) lj.push_back({p.epsilon, p.sigma});
  j["lj_params"] = lj;
  json restraints = json::array();
  for (const auto& r : t.restraints) {
    restraints.push_back({r.atom, r.anchor.x, r.anchor.y, r.anchor.z, r.k});
  }
  j["restraints"] = restraints;
  json excl = json::array();
  for (const auto& [a, b] : t.nonbonded_exclusions) excl.push_back({a, b});
  j["nonbonded_exclusions"] = excl;
  j["nonbonded"] =
      t.nonbonded == md::NonbondedKind::kRepulsive ? "repulsive" : "lj";
  return j;
}

md::Topology topology_from_json(const nlohmann::json& j) {
  try {
    md::Topology t;
    t.atom_names = j.at("atom_names").get<std::vector<std::string>>();
    t.masses = j.at("masses").get<std::vector<double>>();
    for (const auto& b : j.at("bonds")) {
      t.bonds.push_back({b[0].get<int>(), b[1].get<int>(), b[2].get<double>(),
                         b[3].get<double>()});
    }
    for (const auto& a : j.at("angles")) {
      t.angles.push_back({a[0].get<int>(), a[1].get<int>(), a[2].get<int>(),
                          a[3].get<double>(), a[4].get<double>()});
    }
    for (const auto& p : j.at("lj_params")) {
      t.lj_params.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    for (const auto& r : j.at("restraints")) {
      t.restraints.push_back(
          {r[0].get<int>(),
           {r[1].get<double>(), r[2].get<double>(), r[3].get<double>()},
           r[4].get<double>()});
    }
    for (const auto& e : j.at("nonbonded_exclusions")) {
      t.nonbonded_exclusions.emplace(e[0].get<int>(), e[1].get<int>());
    }
    t.nonbonded = j.at("nonbonded").get<std::string>() == "repulsive"
                      ? md::NonbondedKind::kRepulsive
                      : md::NonbondedKind::kLennardJones;
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed topology: ") + e.what());
  }
}

}  // namespace demoforge::recording
