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

#include "demoforge/service/protocol.h"

#include <cmath>

namespace demoforge::service {

using nlohmann::json;

json parse_message(std::string_view text) {
  json msg;
  try {
    msg = json::parse(text);
  } catch (const json::exception& e) {
    throw ProtocolError(kBadMessage, std::string("malformed JSON: ") + e.what());
  }
  if (!msg.is_object()) throw ProtocolError(kBadMessage, "expected an object");
  if (!msg.contains("type") || !msg["type"].is_string()) {
    throw ProtocolError(kBadMessage, "missing string field 'type'");
  }
  if (msg.contains("version") &&
      (!msg["version"].is_number_integer() ||
       msg["version"].get<int>() != kProtocolVersion)) {
    throw ProtocolError(kBadMessage, "unsupported protocol version");
  }
  return msg;
}

json make_message(std::string_view type, json payload) {
  payload["type"] = type;
  payload["version"] = kProtocolVersion;
  return payload;
}

json hello_message(std::string_view session_id, bool playback) {
  return make_message("hello", {{"session", session_id},
                                {"mode", playback ? "playback" : "live"}});
}

json topology_message(std::string_view task_id, const md::Topology& topology) {
  json j = recording::topology_to_json(topology);
  j["task_id"] = task_id;
  return make_message("topology", std::move(j));
}

json flatten(const std::vector<Vec3>& v) {
  json out = json::array();
  for (const auto& p : v) {
    out.push_back(p.x);
    out.push_back(p.y);
    out.push_back(p.z);
  }
  return out;
}

json frame_message(const recording::Frame& f, int epoch) {
  return make_message("frame", {{"step", f.step},
                                {"sim_time", f.sim_time},
                                {"wall_time_ms", f.wall_time_ms},
                                {"epoch", epoch},
                                {"positions", flatten(f.positions)},
                                {"user_forces", flatten(f.user_forces)},
                                {"potential", f.potential},
                                {"kinetic", f.kinetic}});
}

json state_update_message(const recording::SharedStateEvent& e) {
  return make_message("state_update", {{"key", e.key},
                                       {"value", e.value},
                                       {"wall_time_ms", e.wall_time_ms}});
}

json error_message(std::string_view code, std::string_view detail) {
  return make_message("error", {{"code", code}, {"detail", detail}});
}

const json& require(const json& msg, const char* key) {
  if (!msg.contains(key)) {
    throw ProtocolError(kBadMessage, std::string("missing field '") + key + "'");
  }
  return msg[key];
}

std::string require_string(const json& msg, const char* key) {
  const json& v = require(msg, key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<int64_t>());
  throw ProtocolError(kBadMessage, std::string("field '") + key +
                                       "' must be a string");
}

Vec3 require_vec3(const json& msg, const char* key) {
  const json& v = require(msg, key);
  if (!v.is_array() || v.size() != 3) {
    throw ProtocolError(kBadMessage,
                        std::string("field '") + key + "' must be [x, y, z]");
  }
  Vec3 out;
  for (int d = 0; d < 3; ++d) {
    if (!v[d].is_number() || !std::isfinite(v[d].get<double>())) {
      throw ProtocolError(kBadMessage,
                          std::string("field '") + key + "' is not finite");
    }
    out[d] = v[d].get<double>();
  }
  return out;
}

md::InteractiveForce parse_interaction_start(const json& msg,
                                             const md::Topology& topology) {
  md::InteractiveForce f;
  f.id = require_string(msg, "id");
  const json& atoms = require(msg, "atoms");
  if (!atoms.is_array()) {
    throw ProtocolError(kBadMessage, "field 'atoms' must be an array");
  }
  try {
    for (const auto& a : atoms) {
      if (a.is_string()) {
        f.atom_indices.push_back(topology.index_of(a.get<std::string>()));
      } else if (a.is_number_integer()) {
        f.atom_indices.push_back(a.get<int>());
      } else {
        throw ProtocolError(kBadMessage, "atoms must be indices or names");
      }
    }
    if (msg.contains("mode")) {
      f.mode = md::parse_interaction_mode(require_string(msg, "mode"));
    }
    if (msg.contains("scale")) {
      if (!msg["scale"].is_number()) {
        throw ProtocolError(kBadMessage, "field 'scale' must be a number");
      }
      f.scale = msg["scale"].get<double>();
    }
    f.controller_position = require_vec3(msg, "position");
    f.validate(topology.atom_count());
  } catch (const ProtocolError&) {
    throw;
  } catch (const Error& e) {
    throw ProtocolError(kBadMessage, e.what());
  }
  return f;
}

}  // namespace demoforge::service
