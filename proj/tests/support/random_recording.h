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

#ifndef DEMOFORGE_TESTS_SUPPORT_RANDOM_RECORDING_H_
#define DEMOFORGE_TESTS_SUPPORT_RANDOM_RECORDING_H_

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "demoforge/common/random.h"
#include "demoforge/recording/recording.h"

namespace demoforge::testing {

inline md::Topology small_topology(int n) {
  md::Topology t;
  for (int i = 0; i < n; ++i) {
    t.atom_names.push_back("A" + std::to_string(i + 1));
    t.masses.push_back(1.0 + i);
    t.lj_params.push_back({0.1, 0.3});
  }
  return t;
}

// Any finite double, including subnormals and signed zeros.
inline double random_double(Rng& rng) {
  switch (rng.below(6)) {
    case 0:
      return rng.normal();
    case 1:
      return -0.0;
    case 2:
      return std::numeric_limits<double>::denorm_min() * (1 + rng.below(1000));
    case 3:
      return rng.uniform(-1e300, 1e300);
    default: {
      double d;
      do {
        d = std::bit_cast<double>(rng.next_u64());
      } while (!std::isfinite(d));
      return d;
    }
  }
}

inline recording::Recording random_recording(uint64_t seed) {
  Rng rng(seed);
  const int n = 1 + static_cast<int>(rng.below(5));
  recording::RecordingHeader h;
  h.task_id = rng.below(2) ? "nanotube" : "alanine17";
  h.topology = small_topology(n);
  h.dt = rng.uniform(1e-4, 1e-2);
  h.created_wall_ms = static_cast<int64_t>(rng.below(1u << 30));
  h.seed = rng.next_u64();
  h.frame_interval = 1 + static_cast<int>(rng.below(20));
  h.metadata = {{"note", "r" + std::to_string(seed)}};
  recording::Recording rec(h);
  int64_t step = 0, frame_wall = 0, event_wall = 0;
  const int items = static_cast<int>(rng.below(40));
  for (int k = 0; k < items; ++k) {
    if (rng.below(3) != 0) {
      recording::Frame f;
      step += static_cast<int64_t>(rng.below(3));
      frame_wall += static_cast<int64_t>(rng.below(50));
      f.step = step;
      f.wall_time_ms = frame_wall;
      f.sim_time = random_double(rng);
      f.potential = random_double(rng);
      f.kinetic = random_double(rng);
      for (int i = 0; i < n; ++i) {
        f.positions.push_back({random_double(rng), random_double(rng), random_double(rng)});
        f.user_forces.push_back({random_double(rng), random_double(rng), random_double(rng)});
      }
      rec.append_frame(std::move(f));
    } else {
      event_wall += static_cast<int64_t>(rng.below(50));
      nlohmann::json value = {{"x", rng.normal()},
                              {"id", std::to_string(rng.below(100))},
                              {"list", {1, 2, rng.below(9)}}};
      rec.append_event({event_wall, "interaction/update", value});
    }
  }
  return rec;
}

}  // namespace demoforge::testing

#endif  // DEMOFORGE_TESTS_SUPPORT_RANDOM_RECORDING_H_
