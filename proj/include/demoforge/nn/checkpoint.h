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

#ifndef DEMOFORGE_NN_CHECKPOINT_H_
#define DEMOFORGE_NN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "demoforge/nn/gaussian_policy.h"
#include "demoforge/nn/mlp.h"

namespace demoforge::nn {

// "DFNN" | u32 version | u32 header_len | header JSON | f64 block.
// For a policy the block is: network params, log_std, obs_scale,
// action_scale. For a bare network it is the network params. Floats are
// little-endian, so a load reproduces every bit.
struct Checkpoint {
  std::string kind;  // "gaussian_policy" or "mlp"
  uint64_t seed = 0;
  nlohmann::json metadata = nlohmann::json::object();
  GaussianPolicy policy;  // kind == "gaussian_policy"
  Mlp net;                // kind == "mlp"
};

std::string encode_checkpoint(const GaussianPolicy& policy, uint64_t seed,
                              const nlohmann::json& metadata = {});
std::string encode_checkpoint(const Mlp& net, uint64_t seed,
                              const nlohmann::json& metadata = {});
// FormatError / CorruptionError on bad input.
Checkpoint decode_checkpoint(const std::string& bytes);

void save_policy(const std::filesystem::path& path,
                 const GaussianPolicy& policy, uint64_t seed,
                 const nlohmann::json& metadata = {});
GaussianPolicy load_policy(const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace demoforge::nn

#endif  // DEMOFORGE_NN_CHECKPOINT_H_
