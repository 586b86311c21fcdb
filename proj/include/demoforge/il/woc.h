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

#ifndef DEMOFORGE_IL_WOC_H_
#define DEMOFORGE_IL_WOC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "demoforge/common/vec3.h"

namespace demoforge::il {

using Path = std::vector<Vec3>;

inline constexpr int kWocSamples = 100;

// `n` points equally spaced in normalised arc length. InvalidArgumentError
// for a path of zero length.
Path resample_by_arc_length(std::span<const Vec3> path, int n = kWocSamples);

// Distance from a point to a polyline.
double distance_to_polyline(const Vec3& p, std::span<const Vec3> polyline);

// Mean distance of the path's points to the reference polyline.
double path_error(std::span<const Vec3> path, std::span<const Vec3> reference);

struct WocReport {
  Path aggregate;
  std::vector<double> individual_errors;
  double aggregate_error = 0.0;
  double median_individual_error = 0.0;
  // median individual error / aggregate error
  double improvement_ratio = 0.0;
};

// Resamples every path, averages pointwise, and scores everything against
// `reference` after resampling. InvalidArgumentError with fewer than two
// paths.
WocReport woc_aggregate(const std::vector<Path>& paths,
                        std::span<const Vec3> reference);

// Synthetic crowd: the reference path displaced by smooth random lateral
// offsets whose per-axis standard deviation is `sigma`.
std::vector<Path> noisy_axis_paths(std::span<const Vec3> reference, int count,
                                   double sigma, uint64_t seed);

}  // namespace demoforge::il

#endif  // DEMOFORGE_IL_WOC_H_
