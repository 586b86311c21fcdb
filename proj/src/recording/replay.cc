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

#include "demoforge/recording/replay.h"

#include <cmath>
#include <string>

#include "demoforge/common/error.h"

namespace demoforge::recording {
namespace {

void check_speed(double speed) {
  if (!(speed > 0.0) || !std::isfinite(speed)) {
    throw InvalidArgumentError("replay speed must be positive");
  }
}

}  // namespace

Replayer::Replayer(std::shared_ptr<const Recording> rec, double speed)
    : rec_(std::move(rec)), speed_(speed) {
  if (!rec_) throw InvalidArgumentError("null recording");
  check_speed(speed);
  order_ = merged_order(*rec_);
  sync_clock();
}

void Replayer::set_speed(double speed) {
  check_speed(speed);
  speed_ = speed;
}

void Replayer::restart() {
  cursor_ = 0;
  sync_clock();
}

void Replayer::seek(int64_t step) {
  const auto& frames = rec_->frames();
  if (frames.empty() || step > frames.back().step) {
    throw RangeError("seek to step " + std::to_string(step) +
                     " beyond the last recorded frame");
  }
  for (size_t i = 0; i < order_.size(); ++i) {
    if (order_[i].kind == StreamRef::Kind::kFrame &&
        frames[order_[i].index].step >= step) {
      cursor_ = i;
      break;
    }
  }
  sync_clock();
}

void Replayer::sync_clock() {
  if (cursor_ < order_.size()) {
    clock_ms_ = static_cast<double>(order_[cursor_].wall_time_ms);
  }
}

ReplayItem Replayer::item(size_t i) const {
  const StreamRef& ref = order_[i];
  ReplayItem out;
  out.kind = ref.kind;
  out.wall_time_ms = ref.wall_time_ms;
  if (ref.kind == StreamRef::Kind::kFrame) {
    out.frame = &rec_->frames()[ref.index];
  } else {
    out.event = &rec_->events()[ref.index];
  }
  return out;
}

std::optional<ReplayItem> Replayer::next() {
  if (finished()) return std::nullopt;
  ReplayItem out = item(cursor_++);
  clock_ms_ = std::max(clock_ms_, static_cast<double>(out.wall_time_ms));
  return out;
}

std::vector<ReplayItem> Replayer::advance(double elapsed_ms) {
  std::vector<ReplayItem> out;
  if (!playing_) return out;
  clock_ms_ += elapsed_ms * speed_;
  while (!finished() &&
         static_cast<double>(order_[cursor_].wall_time_ms) <= clock_ms_) {
    out.push_back(item(cursor_++));
  }
  return out;
}

std::vector<ReplayItem> replay(std::shared_ptr<const Recording> rec,
                               double speed) {
  Replayer r(std::move(rec), speed);
  std::vector<ReplayItem> out;
  out.reserve(r.size());
  while (auto it = r.next()) out.push_back(*it);
  return out;
}

}  // namespace demoforge::recording
