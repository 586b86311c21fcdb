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

#ifndef DEMOFORGE_RECORDING_RECORDING_H_
#define DEMOFORGE_RECORDING_RECORDING_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "demoforge/common/vec3.h"
#include "demoforge/md/topology.h"

namespace demoforge::recording {

inline constexpr uint32_t kFormatVersion = 1;

// One simulation snapshot. wall_time_ms is the session clock used to merge
// frames with shared-state events.
struct Frame {
  int64_t step = 0;
  double sim_time = 0.0;  // ps
  int64_t wall_time_ms = 0;
  std::vector<Vec3> positions;    // nm
  std::vector<Vec3> user_forces;  // kJ/mol/nm
  double potential = 0.0;         // kJ/mol
  double kinetic = 0.0;           // kJ/mol

  friend bool operator==(const Frame&, const Frame&) = default;
};

// Timestamped key/value update: avatar pose, interaction lifecycle,
// playback commands, labels.
struct SharedStateEvent {
  int64_t wall_time_ms = 0;
  std::string key;
  nlohmann::json value;

  friend bool operator==(const SharedStateEvent&,
                         const SharedStateEvent&) = default;
};

struct RecordingHeader {
  uint32_t format_version = kFormatVersion;
  std::string task_id;
  md::Topology topology;
  double dt = 0.001;
  int64_t created_wall_ms = 0;
  uint64_t seed = 0;
  // Integrator steps between recorded frames.
  int frame_interval = 10;
  nlohmann::json metadata = nlohmann::json::object();

  friend bool operator==(const RecordingHeader&,
                         const RecordingHeader&) = default;
};

class Recording {
 public:
  Recording() = default;
  explicit Recording(RecordingHeader header) : header_(std::move(header)) {}

  const RecordingHeader& header() const { return header_; }
  RecordingHeader& header() { return header_; }

  // Throws OrderingError if frame.step is below the last recorded step and
  // DimensionError if array lengths disagree with the topology.
  void append_frame(Frame frame);
  // Throws OrderingError if wall time goes backwards.
  void append_event(SharedStateEvent event);

  const std::vector<Frame>& frames() const { return frames_; }
  const std::vector<SharedStateEvent>& events() const { return events_; }
  size_t frame_count() const { return frames_.size(); }
  size_t event_count() const { return events_.size(); }
  bool empty() const { return frames_.empty() && events_.empty(); }

  friend bool operator==(const Recording&, const Recording&) = default;

 private:
  RecordingHeader header_;
  std::vector<Frame> frames_;
  std::vector<SharedStateEvent> events_;
};

// Position of one item in the merged (wall-time ordered) stream.
struct StreamRef {
  enum class Kind { kFrame, kEvent };
  Kind kind = Kind::kFrame;
  size_t index = 0;
  int64_t wall_time_ms = 0;
};

// Frames and events interleaved by wall time; a frame precedes an event with
// the same timestamp. Each stream keeps its own order.
std::vector<StreamRef> merged_order(const Recording& rec);

// Value-semantics form: returns `rec` with `frame` appended.
Recording append_frame(Recording rec, Frame frame);

// (step, position) of one named atom across all frames; LookupError if the
// name is not in the topology.
std::vector<std::pair<int64_t, Vec3>> extract_atom_trajectory(
    const Recording& rec, std::string_view atom_name);

// [begin, end) frame ranges of the episodes in a rollout recording, split at
// `episode/start` events. A recording without them is one episode.
std::vector<std::pair<size_t, size_t>> episode_frame_ranges(
    const Recording& rec);

nlohmann::json topology_to_json(const md::Topology& topology);
md::Topology topology_from_json(const nlohmann::json& j);

}  // namespace demoforge::recording

#endif  // DEMOFORGE_RECORDING_RECORDING_H_
