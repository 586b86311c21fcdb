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

#ifndef DEMOFORGE_RECORDING_CONTAINER_H_
#define DEMOFORGE_RECORDING_CONTAINER_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "demoforge/recording/recording.h"

namespace demoforge::recording {

// `.mdil` layout, all integers and floats little-endian:
//
//   "MDIL" | u32 version | u32 header_len | header JSON
//   record*: u8 tag | u32 payload_len | payload
//
//   tag 0 (frame):  i64 step | f64 sim_time | i64 wall_time_ms |
//                   f64 potential | f64 kinetic | u32 n |
//                   n*3 f64 positions | n*3 f64 user_forces
//   tag 1 (event):  i64 wall_time_ms | u32 key_len | key |
//                   u32 value_len | value JSON
//
// Records are written in merged wall-time order (frames first on ties).
inline constexpr char kMagic[4] = {'M', 'D', 'I', 'L'};

// Returns the number of bytes written.
uint64_t write_recording(const Recording& rec, std::ostream& out);
uint64_t write_recording(const Recording& rec,
                         const std::filesystem::path& path);

std::string encode_recording(const Recording& rec);

// FormatError on bad magic or version; CorruptionError (with byte offset)
// on truncated or malformed records.
Recording read_recording(std::istream& in);
Recording read_recording(const std::filesystem::path& path);
Recording decode_recording(const std::string& bytes);

}  // namespace demoforge::recording

#endif  // DEMOFORGE_RECORDING_CONTAINER_H_
