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

#ifndef DEMOFORGE_ENV_EXPERT_H_
#define DEMOFORGE_ENV_EXPERT_H_

#include <vector>

#include "demoforge/common/vec3.h"
#include "demoforge/env/task_env.h"

namespace demoforge::env {

struct ScriptedExpertConfig {
  std::vector<Vec3> waypoints;  // tube frame, ordered by axial coordinate
  double kp = 500.0;            // kJ/mol/nm^2
  double kd = 50.0;             // kJ/mol*ps/nm^2
  double tolerance = 0.15;      // nm
  double max_force = md::kDefaultMaxForce;

  // Throws InvalidArgumentError.
  void validate() const;
};

// Waypoints at entrance - 0.5 nm, tube centre and exit + 0.5 nm on the axis.
ScriptedExpertConfig default_expert_config(const TubeFrame& frame);
ScriptedExpertConfig default_expert_config(
    const md::NanotubeGeometry& geometry = {});

// Index of the waypoint the expert steers to from tube-frame COM `x`. While
// off-axis by more than the tolerance and short of the midpoint between
// the first two waypoints it is the first waypoint (line up before
// entering); otherwise the first waypoint still more than the tolerance
// ahead along the axis, or the last one.
int active_waypoint(const Vec3& x, const ScriptedExpertConfig& config);

// PD force towards the active waypoint, clamped to max_force. Depends on the
// observation only, so it can relabel any visited state.
Vec3 expert_action(const Observation& obs, const ScriptedExpertConfig& config);

}  // namespace demoforge::env

#endif  // DEMOFORGE_ENV_EXPERT_H_
