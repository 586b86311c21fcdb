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

#ifndef DEMOFORGE_IL_DATASET_H_
#define DEMOFORGE_IL_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "demoforge/env/rollout.h"
#include "demoforge/recording/recording.h"

namespace demoforge::il {

enum class SourceKind { kScripted, kHuman };

std::string_view to_string(SourceKind kind);
SourceKind parse_source_kind(std::string_view name);

// State-action pairs; actions are forces in the task's action frame
// (kJ/mol/nm), not normalised.
struct ExpertDataset {
  int obs_dim = 0;
  int action_dim = 3;
  std::vector<std::vector<double>> observations;
  std::vector<std::vector<double>> actions;
  std::vector<int64_t> trajectory_ids;
  std::vector<SourceKind> sources;

  size_t size() const { return observations.size(); }
  bool empty() const { return observations.empty(); }

  // DimensionError on a length mismatch.
  void add(std::vector<double> obs, std::vector<double> action,
           int64_t trajectory_id, SourceKind source = SourceKind::kScripted);
  void append(const ExpertDataset& other);
  std::vector<int64_t> unique_trajectories() const;
  ExpertDataset subset(std::span<const size_t> rows) const;

  friend bool operator==(const ExpertDataset&, const ExpertDataset&) = default;
};

// One row per step, trajectory id = position in `trajectories` plus
// `first_id`.
ExpertDataset dataset_from_trajectories(
    std::span<const env::Trajectory> trajectories,
    SourceKind source = SourceKind::kScripted, int64_t first_id = 0);

// Rebuilds pairs from the `agent/step` events of a rollout recording (the
// episode number becomes the trajectory id). Recordings of human sessions
// without agent events yield an empty dataset.
ExpertDataset dataset_from_recording(const recording::Recording& rec,
                                     SourceKind source = SourceKind::kScripted);

// Rows whose trajectory falls in the validation part of a seeded split by
// trajectory id. `val_fraction` of the ids (at least one when there are two
// or more ids) go to validation.
struct DatasetSplit {
  std::vector<size_t> train;
  std::vector<size_t> validation;
};
DatasetSplit split_by_trajectory(const ExpertDataset& data, double val_fraction,
                                 uint64_t seed);

// Portable tensor file: "DFTS" | u32 version | u32 header_len | header JSON |
// f64 observations (rows x obs_dim) | f64 actions (rows x action_dim).
// The header carries the shapes, trajectory ids and source kinds.
std::string encode_tensor_file(const ExpertDataset& data);
ExpertDataset decode_tensor_file(const std::string& bytes);
void write_tensor_file(const std::filesystem::path& path,
                       const ExpertDataset& data);
ExpertDataset read_tensor_file(const std::filesystem::path& path);

// Reads a `.mdil` recording or a tensor file, chosen by magic bytes.
ExpertDataset load_dataset(const std::filesystem::path& path);

}  // namespace demoforge::il

#endif  // DEMOFORGE_IL_DATASET_H_
