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

#include "demoforge/il/woc.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "demoforge/common/error.h"
#include "demoforge/common/random.h"

namespace demoforge::il {

Path resample_by_arc_length(std::span<const Vec3> path, int n) {
  if (path.size() < 2 || n < 2) {
    throw InvalidArgumentError("need a path of at least two points");
  }
  std::vector<double> cum(path.size(), 0.0);
  for (size_t i = 1; i < path.size(); ++i) {
    cum[i] = cum[i - 1] + norm(path[i] - path[i - 1]);
  }
  const double total = cum.back();
  if (!(total > 0.0)) throw InvalidArgumentError("path has zero length");
  Path out;
  out.reserve(n);
  size_t seg = 1;
  for (int k = 0; k < n; ++k) {
    const double target = total * k / (n - 1);
    while (seg + 1 < path.size() && cum[seg] < target) ++seg;
    const double len = cum[seg] - cum[seg - 1];
    const double f = len > 0.0 ? std::clamp((target - cum[seg - 1]) / len, 0.0, 1.0)
                               : 0.0;
    out.push_back(path[seg - 1] + (path[seg] - path[seg - 1]) * f);
  }
  return out;
}

double distance_to_polyline(const Vec3& p, std::span<const Vec3> polyline) {
  if (polyline.size() == 1) return norm(p - polyline[0]);
  double best = INFINITY;
  for (size_t i = 0; i + 1 < polyline.size(); ++i) {
    const Vec3 a = polyline[i];
    const Vec3 ab = polyline[i + 1] - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0)
                                : 0.0;
    best = std::min(best, norm(p - (a + ab * t)));
  }
  return best;
}

double path_error(std::span<const Vec3> path, std::span<const Vec3> reference) {
  double total = 0.0;
  for (const auto& p : path) total += distance_to_polyline(p, reference);
  return total / static_cast<double>(path.size());
}

WocReport woc_aggregate(const std::vector<Path>& paths,
                        std::span<const Vec3> reference) {
  if (paths.size() < 2) {
    throw InvalidArgumentError("aggregation needs at least two trajectories");
  }
  WocReport r;
  r.aggregate.assign(kWocSamples, Vec3{});
  for (const auto& p : paths) {
    const Path s = resample_by_arc_length(p);
    r.individual_errors.push_back(path_error(s, reference));
    for (int k = 0; k < kWocSamples; ++k) r.aggregate[k] += s[k];
  }
  for (auto& p : r.aggregate) p = p / static_cast<double>(paths.size());
  r.aggregate_error = path_error(r.aggregate, reference);
  std::vector<double> sorted = r.individual_errors;
  std::sort(sorted.begin(), sorted.end());
  const size_t m = sorted.size();
  r.median_individual_error =
      m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  r.improvement_ratio = r.aggregate_error > 0.0
                            ? r.median_individual_error / r.aggregate_error
                            : INFINITY;
  return r;
}

std::vector<Path> noisy_axis_paths(std::span<const Vec3> reference, int count,
                                   double sigma, uint64_t seed) {
  const Path ref = resample_by_arc_length(reference, kWocSamples);
  Vec3 dir = ref.back() - ref.front();
  dir = dir / norm(dir);
  Vec3 e1 = std::abs(dir.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  e1 -= dir * dot(e1, dir);
  e1 = e1 / norm(e1);
  const Vec3 e2 = cross(dir, e1);

  Rng rng(mix64(seed ^ 0x776f63ULL));
  std::vector<Path> out;
  constexpr int kModes = 3;
  for (int c = 0; c < count; ++c) {
    // Offsets are sums of sine modes with amplitudes scaled so each lateral
    // component has variance sigma^2 averaged along the path.
    double amp[2][kModes], phase[2][kModes];
    for (int ax = 0; ax < 2; ++ax) {
      for (int m = 0; m < kModes; ++m) {
        amp[ax][m] = rng.normal() * sigma * std::sqrt(2.0 / kModes);
        phase[ax][m] = rng.uniform(0.0, 2.0 * std::numbers::pi);
      }
    }
    Path p;
    for (int k = 0; k < kWocSamples; ++k) {
      const double s = static_cast<double>(k) / (kWocSamples - 1);
      double off[2] = {0.0, 0.0};
      for (int ax = 0; ax < 2; ++ax) {
        for (int m = 0; m < kModes; ++m) {
          off[ax] += amp[ax][m] *
                     std::sin(std::numbers::pi * (m + 1) * s + phase[ax][m]);
        }
      }
      p.push_back(ref[k] + e1 * off[0] + e2 * off[1]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace demoforge::il
