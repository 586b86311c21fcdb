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

#include "demoforge/env/expert.h"

#include <cmath>

#include "demoforge/common/error.h"
#include "demoforge/md/forcefield.h"

namespace demoforge::env {

void ScriptedExpertConfig::validate() const {
  if (waypoints.empty()) throw InvalidArgumentError("expert has no waypoints");
  if (kp < 0.0 || kd < 0.0) throw InvalidArgumentError("negative gain");
  if (!(tolerance > 0.0)) throw InvalidArgumentError("tolerance must be > 0");
  for (size_t i = 1; i < waypoints.size(); ++i) {
    if (waypoints[i].z < waypoints[i - 1].z) {
      throw InvalidArgumentError("waypoints must be ordered along the axis");
    }
  }
}

ScriptedExpertConfig default_expert_config(const TubeFrame& frame) {
  ScriptedExpertConfig c;
  c.waypoints = {{0.0, 0.0, frame.entrance - 0.5},
                 {0.0, 0.0, 0.5 * (frame.entrance + frame.exit)},
                 {0.0, 0.0, frame.exit + 0.5}};
  return c;
}

ScriptedExpertConfig default_expert_config(
    const md::NanotubeGeometry& geometry) {
  TubeFrame f;
  f.entrance = geometry.entrance_z();
  f.exit = geometry.exit_z();
  f.radius = geometry.radius;
  return default_expert_config(f);
}

int active_waypoint(const Vec3& x, const ScriptedExpertConfig& config) {
  const auto& w = config.waypoints;
  const int last = static_cast<int>(w.size()) - 1;
  if (last >= 1 && std::hypot(x.x, x.y) > config.tolerance &&
      x.z < 0.5 * (w[0].z + w[1].z)) {
    return 0;
  }
  for (int k = 0; k < last; ++k) {
    if (x.z < w[k].z - config.tolerance) return k;
  }
  return last;
}

Vec3 expert_action(const Observation& obs, const ScriptedExpertConfig& config) {
  if (obs.size() < 6) throw DimensionError("expert needs a nanotube observation");
  const Vec3 x{obs[0], obs[1], obs[2]};
  const Vec3 v{obs[3], obs[4], obs[5]};
  const Vec3 f =
      (config.waypoints[active_waypoint(x, config)] - x) * config.kp -
      v * config.kd;
  return md::clamp_magnitude(f, config.max_force);
}

}  // namespace demoforge::env
