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

#include "demoforge/nn/checkpoint.h"

#include <fstream>
#include <iterator>

#include "demoforge/common/bytes.h"
#include "demoforge/common/error.h"

namespace demoforge::nn {
namespace {

constexpr char kMagic[4] = {'D', 'F', 'N', 'N'};
constexpr uint32_t kVersion = 1;

std::string encode(const nlohmann::json& header,
                   const std::vector<double>& block) {
  ByteWriter w;
  w.bytes({kMagic, 4});
  w.u32(kVersion);
  const std::string h = header.dump();
  w.u32(static_cast<uint32_t>(h.size()));
  w.bytes(h);
  for (double p : block) w.f64(p);
  return std::move(w.str());
}

}  // namespace

std::string encode_checkpoint(const GaussianPolicy& policy, uint64_t seed,
                              const nlohmann::json& metadata) {
  nlohmann::json h = {{"kind", "gaussian_policy"},
                      {"sizes", policy.net().sizes()},
                      {"seed", seed},
                      {"activation", "tanh"},
                      {"metadata", metadata.is_null() ? nlohmann::json::object()
                                                      : metadata}};
  std::vector<double> block = policy.params();
  block.insert(block.end(), policy.obs_scale().begin(),
               policy.obs_scale().end());
  block.push_back(policy.action_scale());
  return encode(h, block);
}

std::string encode_checkpoint(const Mlp& net, uint64_t seed,
                              const nlohmann::json& metadata) {
  nlohmann::json h = {{"kind", "mlp"},
                      {"sizes", net.sizes()},
                      {"seed", seed},
                      {"activation", "tanh"},
                      {"metadata", metadata.is_null() ? nlohmann::json::object()
                                                      : metadata}};
  return encode(h, {net.params().begin(), net.params().end()});
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  if (bytes.size() < 12 || bytes.compare(0, 4, kMagic, 4) != 0) {
    throw FormatError("not a checkpoint (bad magic)");
  }
  ByteReader r(bytes);
  r.bytes(4);
  if (r.u32() != kVersion) throw FormatError("unsupported checkpoint version");
  const uint32_t len = r.u32();
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(r.bytes(len));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad checkpoint header: ") + e.what());
  }
  Checkpoint c;
  std::vector<int> sizes;
  try {
    c.kind = h.at("kind").get<std::string>();
    c.seed = h.at("seed").get<uint64_t>();
    c.metadata = h.value("metadata", nlohmann::json::object());
    sizes = h.at("sizes").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad checkpoint header: ") + e.what());
  }
  r.set_error_offset(r.offset());
  auto read_block = [&](size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = r.f64();
    return v;
  };
  if (c.kind == "gaussian_policy") {
    GaussianPolicy p(sizes, 0);
    p.set_params(read_block(p.param_count()));
    p.obs_scale() = read_block(p.obs_dim());
    p.set_action_scale(r.f64());
    c.policy = std::move(p);
  } else if (c.kind == "mlp") {
    Mlp net = Mlp::zeros(sizes);
    const auto block = read_block(net.param_count());
    std::copy(block.begin(), block.end(), net.params().begin());
    c.net = std::move(net);
  } else {
    throw FormatError("unknown checkpoint kind '" + c.kind + "'");
  }
  if (!r.at_end()) throw CorruptionError("trailing bytes", r.offset());
  return c;
}

void save_policy(const std::filesystem::path& path,
                 const GaussianPolicy& policy, uint64_t seed,
                 const nlohmann::json& metadata) {
  const std::string bytes = encode_checkpoint(policy, seed, metadata);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("cannot write " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

GaussianPolicy load_policy(const std::filesystem::path& path) {
  Checkpoint c = load_checkpoint(path);
  if (c.kind != "gaussian_policy") {
    throw FormatError(path.string() + " does not hold a policy");
  }
  return std::move(c.policy);
}

}  // namespace demoforge::nn
