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

#ifndef DEMOFORGE_RECORDING_REPLAY_H_
#define DEMOFORGE_RECORDING_REPLAY_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "demoforge/recording/recording.h"

namespace demoforge::recording {

// One element of a replayed stream. Exactly one of frame/event is set; both
// point into the recording held by the Replayer.
struct ReplayItem {
  StreamRef::Kind kind = StreamRef::Kind::kFrame;
  const Frame* frame = nullptr;
  const SharedStateEvent* event = nullptr;
  int64_t wall_time_ms = 0;
};

// Plays a recording back as a merged stream. The playback clock runs in
// recording wall time scaled by `speed`; the recording is never modified.
class Replayer {
 public:
  // Throws InvalidArgumentError unless speed > 0.
  Replayer(std::shared_ptr<const Recording> rec, double speed = 1.0);

  void play() { playing_ = true; }
  void pause() { playing_ = false; }
  bool playing() const { return playing_; }

  // Cursor back to the first item (frame step 0 for a normal recording).
  void restart();
  // Moves to the first frame whose step is >= `step`; RangeError when `step`
  // is past the last recorded frame.
  void seek(int64_t step);

  void set_speed(double speed);
  double speed() const { return speed_; }

  // Next item regardless of the clock; nullopt at the end.
  std::optional<ReplayItem> next();
  // Advances the clock by `elapsed_ms` of real time (no-op while paused) and
  // returns every item that became due.
  std::vector<ReplayItem> advance(double elapsed_ms);

  bool finished() const { return cursor_ >= order_.size(); }
  size_t cursor() const { return cursor_; }
  size_t size() const { return order_.size(); }
  const Recording& recording() const { return *rec_; }

 private:
  ReplayItem item(size_t i) const;
  void sync_clock();

  std::shared_ptr<const Recording> rec_;
  std::vector<StreamRef> order_;
  double speed_;
  bool playing_ = false;
  size_t cursor_ = 0;
  double clock_ms_ = 0.0;
};

// Whole merged stream in order; speed is validated but does not change the
// order.
std::vector<ReplayItem> replay(std::shared_ptr<const Recording> rec,
                               double speed);

}  // namespace demoforge::recording

#endif  // DEMOFORGE_RECORDING_REPLAY_H_
