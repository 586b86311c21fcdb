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

#include "demoforge/service/svg.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace demoforge::service {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Box {
  double zmin, zmax, xmin, xmax;
};

}  // namespace

std::string trajectory_svg(const std::vector<std::vector<Vec3>>& attempts,
                           const env::TubeFrame& frame,
                           const std::vector<std::vector<Vec3>>& highlight,
                           const std::string& title) {
  constexpr double kWidth = 640.0, kHeight = 360.0, kPad = 40.0;
  Box box{frame.entrance - 1.0, frame.exit + 1.0, -frame.radius - 0.4,
          frame.radius + 0.4};
  for (const auto* group : {&attempts, &highlight}) {
    for (const auto& path : *group) {
      for (const auto& p : path) {
        box.zmin = std::min(box.zmin, p.z);
        box.zmax = std::max(box.zmax, p.z);
        box.xmin = std::min(box.xmin, p.x);
        box.xmax = std::max(box.xmax, p.x);
      }
    }
  }
  const double sx = (kWidth - 2 * kPad) / (box.zmax - box.zmin);
  const double sy = (kHeight - 2 * kPad) / (box.xmax - box.xmin);
  auto px = [&](double z) { return kPad + (z - box.zmin) * sx; };
  auto py = [&](double x) { return kHeight - kPad - (x - box.xmin) * sy; };

  std::ostringstream s;
  s.precision(6);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
    << kHeight << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    s << "<text x=\"" << kPad << "\" y=\"20\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << title << "</text>\n";
  }
  for (double wall : {-frame.radius, frame.radius}) {
    s << "<line x1=\"" << px(frame.entrance) << "\" y1=\"" << py(wall)
      << "\" x2=\"" << px(frame.exit) << "\" y2=\"" << py(wall)
      << "\" stroke=\"#444\" stroke-width=\"4\"/>\n";
  }
  auto polyline = [&](const std::vector<Vec3>& path, const char* colour,
                      double width) {
    s << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\""
      << width << "\" points=\"";
    for (const auto& p : path) s << px(p.z) << ',' << py(p.x) << ' ';
    s << "\"/>\n";
  };
  for (size_t i = 0; i < attempts.size(); ++i) {
    polyline(attempts[i], kPalette[i % std::size(kPalette)], 1.2);
  }
  for (const auto& path : highlight) polyline(path, "#000", 3.0);
  s << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 8
    << "\" font-family=\"sans-serif\" font-size=\"12\">axial (nm)</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace demoforge::service
