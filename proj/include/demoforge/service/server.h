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

#ifndef DEMOFORGE_SERVICE_SERVER_H_
#define DEMOFORGE_SERVICE_SERVER_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "demoforge/service/session.h"

namespace demoforge::service {

struct ServerConfig {
  std::string host = "127.0.0.1";
  uint16_t port = 8765;  // 0 picks a free port
  SessionConfig session;
  // When set, every session plays this recording back instead of simulating.
  std::optional<std::filesystem::path> recording;
  int threads = 1;

  void validate() const;
};

// WebSocket endpoint `/session/{id}`. Connecting subscribes to the session
// (created on first use); text messages go to Session::handle_message.
// Each session runs on its own strand with a steady timer driving tick().
class Server {
 public:
  // Binds immediately; throws Error if the address is unavailable.
  explicit Server(ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  uint16_t port() const;
  // Blocks until stop().
  void run();
  // Runs on background threads and returns.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace demoforge::service

#endif  // DEMOFORGE_SERVICE_SERVER_H_
