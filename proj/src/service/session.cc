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

#include "demoforge/service/session.h"

#include "demoforge/md/builders.h"
#include "demoforge/recording/container.h"
#include "demoforge/service/protocol.h"

namespace demoforge::service {

using nlohmann::json;

void SessionConfig::validate() const {
  if (steps_per_tick < 1 || tick_ms < 1 || frame_subsample < 1) {
    throw InvalidArgumentError(
        "steps_per_tick, tick_ms and frame_subsample must be positive");
  }
  if (langevin_gamma < 0.0 || temperature < 0.0) {
    throw InvalidArgumentError("thermostat parameters must be non-negative");
  }
  if (!(playback_speed > 0.0)) {
    throw InvalidArgumentError("playback speed must be positive");
  }
}

Session::Session(std::string id, SessionConfig config)
    : id_(std::move(id)), config_(std::move(config)) {
  config_.validate();
  task_id_ = std::string(md::to_string(md::parse_task_id(config_.task)));
  reset_live();
}

Session::Session(std::string id, SessionConfig config,
                 std::shared_ptr<const recording::Recording> rec)
    : id_(std::move(id)), config_(std::move(config)) {
  config_.validate();
  if (!rec) throw InvalidArgumentError("null recording");
  task_id_ = rec->header().task_id;
  playback_topology_ = rec->header().topology;
  replayer_.emplace(std::move(rec), config_.playback_speed);
  running_ = false;
}

const md::Topology& Session::topology() const {
  return sim_ ? sim_->topology() : playback_topology_;
}

void Session::reset_live() {
  auto [topology, state] =
      md::build_system(md::parse_task_id(config_.task), config_.seed);
  const md::Thermostat thermostat =
      config_.langevin_gamma > 0.0
          ? md::Thermostat::langevin(config_.langevin_gamma,
                                     config_.temperature, config_.seed)
          : md::Thermostat::none();
  sim_.emplace(std::move(topology), std::move(state), md::kDefaultTimestep,
               thermostat);
  sync_interactions();
  step_ = 0;
  tick_count_ = 0;
}

int Session::subscribe(Sink sink) {
  const int token = next_token_++;
  sink(hello_message(id_, playback()).dump());
  sink(topology_message(task_id_, topology()).dump());
  subscribers_.emplace(token, std::move(sink));
  return token;
}

void Session::unsubscribe(int token) { subscribers_.erase(token); }

void Session::broadcast(const json& msg) {
  const std::string text = msg.dump();
  for (const auto& [token, sink] : subscribers_) sink(text);
}

void Session::log_event(std::string key, json value) {
  if (!recording_) return;
  recording_->append_event({clock_ms_, std::move(key), std::move(value)});
}

void Session::sync_interactions() {
  std::vector<md::InteractiveForce> list;
  for (const auto& [id, f] : interactions_) list.push_back(f);
  sim_->set_interactions(std::move(list));
}

recording::Frame Session::current_frame() {
  recording::Frame f;
  f.step = step_;
  f.sim_time = sim_->state().time;
  f.wall_time_ms = clock_ms_;
  f.positions = sim_->state().positions;
  f.user_forces = sim_->forces().user_forces;
  const md::Energies e = sim_->energies();
  f.potential = e.potential;
  f.kinetic = e.kinetic;
  return f;
}

void Session::handle_message(std::string_view text, const Sink& reply) {
  try {
    dispatch(parse_message(text), reply);
  } catch (const ProtocolError& e) {
    reply(error_message(e.code(), e.what()).dump());
  } catch (const Error& e) {
    reply(error_message(kInvalidRequest, e.what()).dump());
  }
}

void Session::dispatch(const json& msg, const Sink& reply) {
  const std::string type = msg["type"].get<std::string>();
  const bool is_interaction = type == "interaction_start" ||
                              type == "interaction_update" ||
                              type == "interaction_end";
  if (is_interaction && playback()) {
    throw ProtocolError(kPlaybackReadonly,
                        "interactions are not accepted during playback");
  }

  if (type == "hello") {
    reply(hello_message(id_, playback()).dump());
  } else if (type == "interaction_start") {
    md::InteractiveForce f = parse_interaction_start(msg, topology());
    if (interactions_.contains(f.id)) {
      throw ProtocolError(kBadMessage, "interaction id '" + f.id +
                                           "' is already active");
    }
    json logged = msg;
    logged.erase("type");
    logged.erase("version");
    const std::string id = f.id;
    interactions_.emplace(id, std::move(f));
    sync_interactions();
    log_event("interaction/start", std::move(logged));
  } else if (type == "interaction_update") {
    const std::string id = require_string(msg, "id");
    auto it = interactions_.find(id);
    if (it == interactions_.end()) {
      throw ProtocolError(kUnknownInteraction, "no active interaction '" + id + "'");
    }
    md::InteractiveForce updated = it->second;
    if (msg.contains("position")) {
      updated.controller_position = require_vec3(msg, "position");
    }
    if (msg.contains("scale")) {
      if (!msg["scale"].is_number()) {
        throw ProtocolError(kBadMessage, "field 'scale' must be a number");
      }
      updated.scale = msg["scale"].get<double>();
    }
    try {
      updated.validate(topology().atom_count());
    } catch (const Error& e) {
      throw ProtocolError(kBadMessage, e.what());
    }
    it->second = updated;
    sync_interactions();
    log_event("interaction/update",
              {{"id", id},
               {"position",
                {updated.controller_position.x, updated.controller_position.y,
                 updated.controller_position.z}},
               {"scale", updated.scale}});
  } else if (type == "interaction_end") {
    const std::string id = require_string(msg, "id");
    if (interactions_.erase(id) == 0) {
      throw ProtocolError(kUnknownInteraction, "no active interaction '" + id + "'");
    }
    sync_interactions();
    log_event("interaction/end", {{"id", id}});
  } else if (type == "play") {
    running_ = true;
    if (replayer_) replayer_->play();
    log_event("playback/play", json::object());
  } else if (type == "pause") {
    running_ = false;
    if (replayer_) replayer_->pause();
    log_event("playback/pause", json::object());
  } else if (type == "restart") {
    if (replayer_) {
      replayer_->restart();
    } else {
      if (recording_) {
        throw ProtocolError(kInvalidRequest,
                            "stop the recording before restarting");
      }
      reset_live();
    }
    ++epoch_;
  } else if (type == "seek") {
    if (!replayer_) {
      throw ProtocolError(kInvalidRequest, "seek needs a playback session");
    }
    const json& step = require(msg, "step");
    if (!step.is_number_integer()) {
      throw ProtocolError(kBadMessage, "field 'step' must be an integer");
    }
    try {
      replayer_->seek(step.get<int64_t>());
    } catch (const RangeError& e) {
      throw ProtocolError(kInvalidRequest, e.what());
    }
    ++epoch_;
  } else if (type == "record_start") {
    if (playback()) {
      throw ProtocolError(kPlaybackReadonly, "cannot record a playback session");
    }
    if (recording_) throw ProtocolError(kInvalidRequest, "already recording");
    recording::RecordingHeader h;
    h.task_id = task_id_;
    h.topology = sim_->topology();
    h.dt = sim_->dt();
    h.created_wall_ms = clock_ms_;
    h.seed = config_.seed;
    h.frame_interval = config_.steps_per_tick;
    h.metadata = {{"session", id_}, {"source", "human"}};
    recording_.emplace(std::move(h));
    recording_path_ = require_string(msg, "path");
    log_event("recording/start", {{"path", recording_path_.string()}});
  } else if (type == "record_stop") {
    if (!recording_) throw ProtocolError(kInvalidRequest, "not recording");
    reply(stop_recording().dump());
  } else if (type == "state_update") {
    const std::string key = require_string(msg, "key");
    log_event(key, msg.value("value", json()));
  } else {
    throw ProtocolError(kBadMessage, "unknown message type '" + type + "'");
  }
}

json Session::stop_recording() {
  log_event("recording/stop", json::object());
  const recording::Recording rec = std::move(*recording_);
  recording_.reset();
  const uint64_t bytes = recording::write_recording(rec, recording_path_);
  return make_message("recording", {{"path", recording_path_.string()},
                                    {"frames", rec.frame_count()},
                                    {"events", rec.event_count()},
                                    {"bytes", bytes}});
}

void Session::tick() {
  clock_ms_ += config_.tick_ms;
  if (replayer_) {
    for (const auto& item : replayer_->advance(config_.tick_ms)) {
      if (item.frame) {
        broadcast(frame_message(*item.frame, epoch_));
      } else {
        broadcast(state_update_message(*item.event));
      }
    }
    return;
  }
  if (!running_) return;
  recording::Frame f = current_frame();
  if (recording_) recording_->append_frame(f);
  if (tick_count_ % config_.frame_subsample == 0) {
    broadcast(frame_message(f, epoch_));
  }
  ++tick_count_;
  sim_->step(config_.steps_per_tick);
  step_ += config_.steps_per_tick;
}

}  // namespace demoforge::service
