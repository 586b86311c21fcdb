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

#ifndef DEMOFORGE_SERVICE_SVG_H_
#define DEMOFORGE_SERVICE_SVG_H_

#include <string>
#include <vector>

#include "demoforge/common/vec3.h"
#include "demoforge/env/task_env.h"

namespace demoforge::service {

// Side view (axial z against transverse x, tube frame) of one path per
// attempt with the tube walls drawn as two lines. `highlight` paths are
// drawn thicker and dark, the rest in a colour cycle.
std::string trajectory_svg(const std::vector<std::vector<Vec3>>& attempts,
                           const env::TubeFrame& frame,
                           const std::vector<std::vector<Vec3>>& highlight = {},
                           const std::string& title = "");

}  // namespace demoforge::service

#endif  // DEMOFORGE_SERVICE_SVG_H_
