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

#include "demoforge/il/dataset.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>

#include "demoforge/common/bytes.h"
#include "demoforge/common/error.h"
#include "demoforge/common/random.h"
#include "demoforge/recording/container.h"

namespace demoforge::il {
namespace {

constexpr char kTensorMagic[4] = {'D', 'F', 'T', 'S'};
constexpr uint32_t kTensorVersion = 1;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string_view to_string(SourceKind kind) {
  return kind == SourceKind::kHuman ? "human" : "scripted";
}

SourceKind parse_source_kind(std::string_view name) {
  if (name == "scripted") return SourceKind::kScripted;
  if (name == "human") return SourceKind::kHuman;
  throw InvalidArgumentError("unknown source kind '" + std::string(name) + "'");
}

void ExpertDataset::add(std::vector<double> obs, std::vector<double> action,
                        int64_t trajectory_id, SourceKind source) {
  if (empty() && obs_dim == 0) obs_dim = static_cast<int>(obs.size());
  if (static_cast<int>(obs.size()) != obs_dim ||
      static_cast<int>(action.size()) != action_dim) {
    throw DimensionError("dataset row has the wrong shape");
  }
  observations.push_back(std::move(obs));
  actions.push_back(std::move(action));
  trajectory_ids.push_back(trajectory_id);
  sources.push_back(source);
}

void ExpertDataset::append(const ExpertDataset& other) {
  for (size_t i = 0; i < other.size(); ++i) {
    add(other.observations[i], other.actions[i], other.trajectory_ids[i],
        other.sources[i]);
  }
}

std::vector<int64_t> ExpertDataset::unique_trajectories() const {
  std::set<int64_t> ids(trajectory_ids.begin(), trajectory_ids.end());
  return {ids.begin(), ids.end()};
}

ExpertDataset ExpertDataset::subset(std::span<const size_t> rows) const {
  ExpertDataset out;
  out.obs_dim = obs_dim;
  out.action_dim = action_dim;
  for (size_t r : rows) {
    out.add(observations.at(r), actions.at(r), trajectory_ids.at(r),
            sources.at(r));
  }
  return out;
}

ExpertDataset dataset_from_trajectories(
    std::span<const env::Trajectory> trajectories, SourceKind source,
    int64_t first_id) {
  ExpertDataset d;
  for (size_t k = 0; k < trajectories.size(); ++k) {
    const auto& t = trajectories[k];
    for (size_t i = 0; i < t.size(); ++i) {
      const Vec3& a = t.actions[i];
      d.add(t.observations[i], {a.x, a.y, a.z},
            first_id + static_cast<int64_t>(k), source);
    }
  }
  return d;
}

ExpertDataset dataset_from_recording(const recording::Recording& rec,
                                     SourceKind source) {
  ExpertDataset d;
  for (const auto& e : rec.events()) {
    if (e.key != "agent/step") continue;
    try {
      d.add(e.value.at("obs").get<std::vector<double>>(),
            e.value.at("action").get<std::vector<double>>(),
            e.value.at("episode").get<int64_t>(), source);
    } catch (const nlohmann::json::exception& ex) {
      throw FormatError(std::string("malformed agent/step event: ") +
                        ex.what());
    }
  }
  return d;
}

DatasetSplit split_by_trajectory(const ExpertDataset& data,
                                 double val_fraction, uint64_t seed) {
  auto ids = data.unique_trajectories();
  Rng rng(mix64(seed ^ 0x73706c6974ULL));
  for (size_t i = ids.size(); i > 1; --i) {
    std::swap(ids[i - 1], ids[rng.below(i)]);
  }
  size_t n_val = static_cast<size_t>(val_fraction * ids.size() + 0.5);
  if (ids.size() >= 2) n_val = std::clamp<size_t>(n_val, 1, ids.size() - 1);
  else n_val = 0;
  const std::set<int64_t> val(ids.begin(), ids.begin() + n_val);
  DatasetSplit s;
  for (size_t r = 0; r < data.size(); ++r) {
    (val.count(data.trajectory_ids[r]) ? s.validation : s.train).push_back(r);
  }
  return s;
}

std::string encode_tensor_file(const ExpertDataset& data) {
  nlohmann::json h;
  h["rows"] = data.size();
  h["obs_dim"] = data.obs_dim;
  h["action_dim"] = data.action_dim;
  h["trajectory_ids"] = data.trajectory_ids;
  std::vector<std::string> sources;
  for (auto s : data.sources) sources.emplace_back(to_string(s));
  h["sources"] = sources;
  h["blocks"] = {{{"name", "observations"},
                  {"shape", {data.size(), data.obs_dim}},
                  {"dtype", "<f8"}},
                 {{"name", "actions"},
                  {"shape", {data.size(), data.action_dim}},
                  {"dtype", "<f8"}}};
  ByteWriter w;
  w.bytes({kTensorMagic, 4});
  w.u32(kTensorVersion);
  const std::string hs = h.dump();
  w.u32(static_cast<uint32_t>(hs.size()));
  w.bytes(hs);
  for (const auto& o : data.observations) for (double x : o) w.f64(x);
  for (const auto& a : data.actions) for (double x : a) w.f64(x);
  return std::move(w.str());
}

ExpertDataset decode_tensor_file(const std::string& bytes) {
  if (bytes.size() < 12 || bytes.compare(0, 4, kTensorMagic, 4) != 0) {
    throw FormatError("not a tensor file (bad magic)");
  }
  ByteReader r(bytes);
  r.bytes(4);
  if (r.u32() != kTensorVersion) throw FormatError("unsupported tensor version");
  const uint32_t len = r.u32();
  ExpertDataset d;
  size_t rows = 0;
  std::vector<std::string> sources;
  try {
    const auto h = nlohmann::json::parse(r.bytes(len));
    rows = h.at("rows").get<size_t>();
    d.obs_dim = h.at("obs_dim").get<int>();
    d.action_dim = h.at("action_dim").get<int>();
    d.trajectory_ids = h.at("trajectory_ids").get<std::vector<int64_t>>();
    sources = h.at("sources").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad tensor header: ") + e.what());
  }
  if (d.trajectory_ids.size() != rows || sources.size() != rows) {
    throw FormatError("tensor header lengths disagree");
  }
  r.set_error_offset(r.offset());
  d.observations.assign(rows, std::vector<double>(d.obs_dim));
  d.actions.assign(rows, std::vector<double>(d.action_dim));
  for (auto& o : d.observations) for (auto& x : o) x = r.f64();
  for (auto& a : d.actions) for (auto& x : a) x = r.f64();
  for (const auto& s : sources) d.sources.push_back(parse_source_kind(s));
  if (!r.at_end()) throw CorruptionError("trailing bytes", r.offset());
  return d;
}

void write_tensor_file(const std::filesystem::path& path,
                       const ExpertDataset& data) {
  const std::string bytes = encode_tensor_file(data);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("cannot write " + path.string());
}

ExpertDataset read_tensor_file(const std::filesystem::path& path) {
  return decode_tensor_file(slurp(path));
}

ExpertDataset load_dataset(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  if (bytes.compare(0, 4, kTensorMagic, 4) == 0) {
    return decode_tensor_file(bytes);
  }
  return dataset_from_recording(recording::decode_recording(bytes));
}

}  // namespace demoforge::il
