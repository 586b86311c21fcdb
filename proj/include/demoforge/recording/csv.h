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

#ifndef DEMOFORGE_RECORDING_CSV_H_
#define DEMOFORGE_RECORDING_CSV_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "demoforge/recording/recording.h"

namespace demoforge::recording {

enum class CsvStyle {
  // `atom name,time,coordinates,user forces`, one row per (frame, atom),
  // time = frame index, triples as quoted "[x, y, z]".
  kTable1,
  // `atom_name,step,x,y,z,fx,fy,fz`.
  kLong,
};

CsvStyle parse_csv_style(std::string_view name);

// Shortest decimal that reads back to the same double, spelled the way
// Python's repr() spells floats ("0.0", "1e-05", "14.941643").
std::string format_float(double value);

// Throws EmptyExportError for a recording without frames.
std::string export_csv(const Recording& rec, CsvStyle style);

struct Table1Row {
  std::string atom_name;
  int64_t frame_index = 0;
  Vec3 coordinates;
  Vec3 user_forces;
};

// Inverse of the table1 export; FormatError on malformed input.
std::vector<Table1Row> parse_table1_csv(std::string_view text);

}  // namespace demoforge::recording

#endif  // DEMOFORGE_RECORDING_CSV_H_
