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

#include "demoforge/common/error.h"

#include <sstream>

namespace demoforge {
namespace {

std::string singularity_message(int i, int j, double r) {
  std::ostringstream os;
  os << "atoms " << i << " and " << j << " overlap (r = " << r << " nm)";
  return os.str();
}

}  // namespace

SingularityError::SingularityError(int i, int j, double r)
    : Error(singularity_message(i, j, r)), i_(i), j_(j) {}

NumericError::NumericError(const std::string& what, int64_t sample)
    : Error(what + " (sample " + std::to_string(sample) + ")"),
      sample_(sample) {}

CorruptionError::CorruptionError(const std::string& what, uint64_t offset)
    : Error(what + " at byte offset " + std::to_string(offset)),
      offset_(offset) {}

}  // namespace demoforge
