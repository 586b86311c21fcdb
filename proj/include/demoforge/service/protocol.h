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

#ifndef DEMOFORGE_SERVICE_PROTOCOL_H_
#define DEMOFORGE_SERVICE_PROTOCOL_H_

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "demoforge/common/error.h"
#include "demoforge/md/forcefield.h"
#include "demoforge/recording/recording.h"

namespace demoforge::service {

inline constexpr int kProtocolVersion = 1;

// Error codes carried by `error` messages.
inline constexpr std::string_view kBadMessage = "bad_message";
inline constexpr std::string_view kPlaybackReadonly = "playback_readonly";
inline constexpr std::string_view kUnknownInteraction = "unknown_interaction";
inline constexpr std::string_view kInvalidRequest = "invalid_request";

// A request the session refuses; turned into an `error` reply.
class ProtocolError : public Error {
 public:
  ProtocolError(std::string_view code, const std::string& detail)
      : Error(detail), code_(code) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Parses a client message: a JSON object with a string `type`. A `version`
// other than kProtocolVersion is rejected; a missing one is tolerated.
// ProtocolError(bad_message) otherwise.
nlohmann::json parse_message(std::string_view text);

nlohmann::json make_message(std::string_view type,
                            nlohmann::json payload = nlohmann::json::object());

nlohmann::json hello_message(std::string_view session_id, bool playback);
nlohmann::json topology_message(std::string_view task_id,
                                const md::Topology& topology);
// `epoch` increments on restart and seek; steps strictly increase within one.
nlohmann::json frame_message(const recording::Frame& frame, int epoch);
nlohmann::json state_update_message(const recording::SharedStateEvent& event);
nlohmann::json error_message(std::string_view code, std::string_view detail);

// Reads interaction_start fields; atoms may be indices or atom names.
// ProtocolError(bad_message) on missing or invalid fields.
md::InteractiveForce parse_interaction_start(const nlohmann::json& msg,
                                             const md::Topology& topology);

// Required field accessors raising ProtocolError(bad_message).
const nlohmann::json& require(const nlohmann::json& msg, const char* key);
std::string require_string(const nlohmann::json& msg, const char* key);
Vec3 require_vec3(const nlohmann::json& msg, const char* key);

nlohmann::json flatten(const std::vector<Vec3>& v);

}  // namespace demoforge::service

#endif  // DEMOFORGE_SERVICE_PROTOCOL_H_
