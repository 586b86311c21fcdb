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

#ifndef DEMOFORGE_SERVICE_SESSION_H_
#define DEMOFORGE_SERVICE_SESSION_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "demoforge/md/integrator.h"
#include "demoforge/recording/recording.h"
#include "demoforge/recording/replay.h"

namespace demoforge::service {

struct SessionConfig {
  std::string task = "nanotube";
  uint64_t seed = 0;
  int steps_per_tick = 10;
  int tick_ms = 33;
  // Broadcast every k-th tick's frame; recordings keep every frame.
  int frame_subsample = 1;
  double langevin_gamma = 1.0;  // 1/ps, 0 disables the thermostat
  double temperature = 300.0;   // K
  double playback_speed = 1.0;

  void validate() const;
};

// Receives serialized JSON messages.
using Sink = std::function<void(const std::string&)>;

// One simulation (or one recording being played back) and its subscribers.
// Not thread-safe: the owner serializes handle_message() and tick(), which
// gives interactions their atomic between-steps semantics.
class Session {
 public:
  // Live session; throws UnsupportedTaskError or InvalidArgumentError.
  Session(std::string id, SessionConfig config);
  // Playback session over a recording. Starts paused.
  Session(std::string id, SessionConfig config,
          std::shared_ptr<const recording::Recording> recording);

  const std::string& id() const { return id_; }
  const std::string& task_id() const { return task_id_; }
  bool playback() const { return replayer_.has_value(); }
  bool running() const { return running_; }
  bool recording() const { return recording_.has_value(); }
  int64_t clock_ms() const { return clock_ms_; }
  const SessionConfig& config() const { return config_; }
  const md::Topology& topology() const;
  // Live only.
  const md::Simulation& simulation() const { return *sim_; }
  const std::map<std::string, md::InteractiveForce>& interactions() const {
    return interactions_;
  }

  // Sends hello and topology to the new subscriber; returns its token.
  int subscribe(Sink sink);
  void unsubscribe(int token);
  size_t subscriber_count() const { return subscribers_.size(); }

  // Applies one client message. Errors go back through `reply` as `error`
  // messages and never escape.
  void handle_message(std::string_view text, const Sink& reply);

  // One wall-clock tick: live sessions emit the current frame and then
  // integrate steps_per_tick steps; playback sessions release every item
  // that fell due.
  void tick();

 private:
  void dispatch(const nlohmann::json& msg, const Sink& reply);
  void broadcast(const nlohmann::json& msg);
  void log_event(std::string key, nlohmann::json value);
  void sync_interactions();
  void reset_live();
  recording::Frame current_frame();
  nlohmann::json stop_recording();

  std::string id_;
  SessionConfig config_;
  std::string task_id_;
  md::Topology playback_topology_;
  std::optional<md::Simulation> sim_;
  std::optional<recording::Replayer> replayer_;
  std::map<std::string, md::InteractiveForce> interactions_;
  std::map<int, Sink> subscribers_;
  int next_token_ = 0;

  bool running_ = true;
  int64_t step_ = 0;
  int64_t tick_count_ = 0;
  int64_t clock_ms_ = 0;
  int epoch_ = 0;

  std::optional<recording::Recording> recording_;
  std::filesystem::path recording_path_;
};

}  // namespace demoforge::service

#endif  // DEMOFORGE_SERVICE_SESSION_H_
