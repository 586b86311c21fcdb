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

#include "demoforge/recording/container.h"

#include <fstream>
#include <iterator>
#include <sstream>

#include "demoforge/common/bytes.h"
#include "demoforge/common/error.h"

namespace demoforge::recording {
namespace {

constexpr uint8_t kFrameTag = 0;
constexpr uint8_t kEventTag = 1;

nlohmann::json header_to_json(const RecordingHeader& h) {
  nlohmann::json j;
  j["task_id"] = h.task_id;
  j["topology"] = topology_to_json(h.topology);
  j["dt"] = h.dt;
  j["created_wall_ms"] = h.created_wall_ms;
  j["seed"] = h.seed;
  j["frame_interval"] = h.frame_interval;
  j["metadata"] = h.metadata;
  return j;
}

RecordingHeader header_from_json(const nlohmann::json& j, uint32_t version) {
  RecordingHeader h;
  h.format_version = version;
  try {
    h.task_id = j.at("task_id").get<std::string>();
    h.topology = topology_from_json(j.at("topology"));
    h.dt = j.at("dt").get<double>();
    h.created_wall_ms = j.at("created_wall_ms").get<int64_t>();
    h.seed = j.at("seed").get<uint64_t>();
    h.frame_interval = j.at("frame_interval").get<int>();
    h.metadata = j.value("metadata", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed header: ") + e.what());
  }
  return h;
}

void write_vecs(ByteWriter& w, const std::vector<Vec3>& v) {
  for (const auto& p : v) {
    w.f64(p.x);
    w.f64(p.y);
    w.f64(p.z);
  }
}

std::vector<Vec3> read_vecs(ByteReader& r, uint32_t n) {
  std::vector<Vec3> v(n);
  for (auto& p : v) {
    p.x = r.f64();
    p.y = r.f64();
    p.z = r.f64();
  }
  return v;
}

}  // namespace

std::string encode_recording(const Recording& rec) {
  ByteWriter w;
  w.bytes({kMagic, 4});
  w.u32(rec.header().format_version);
  const std::string header = header_to_json(rec.header()).dump();
  w.u32(static_cast<uint32_t>(header.size()));
  w.bytes(header);

  for (const auto& ref : merged_order(rec)) {
    const size_t len_pos = w.size() + 1;
    if (ref.kind == StreamRef::Kind::kFrame) {
      const Frame& f = rec.frames()[ref.index];
      w.u8(kFrameTag);
      w.u32(0);
      const size_t start = w.size();
      w.i64(f.step);
      w.f64(f.sim_time);
      w.i64(f.wall_time_ms);
      w.f64(f.potential);
      w.f64(f.kinetic);
      w.u32(static_cast<uint32_t>(f.positions.size()));
      write_vecs(w, f.positions);
      write_vecs(w, f.user_forces);
      w.patch_u32(len_pos, static_cast<uint32_t>(w.size() - start));
    } else {
      const SharedStateEvent& e = rec.events()[ref.index];
      w.u8(kEventTag);
      w.u32(0);
      const size_t start = w.size();
      w.i64(e.wall_time_ms);
      w.u32(static_cast<uint32_t>(e.key.size()));
      w.bytes(e.key);
      const std::string value = e.value.dump();
      w.u32(static_cast<uint32_t>(value.size()));
      w.bytes(value);
      w.patch_u32(len_pos, static_cast<uint32_t>(w.size() - start));
    }
  }
  return std::move(w.str());
}

uint64_t write_recording(const Recording& rec, std::ostream& out) {
  const std::string bytes = encode_recording(rec);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed to write recording");
  return bytes.size();
}

uint64_t write_recording(const Recording& rec,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return write_recording(rec, out);
}

Recording decode_recording(const std::string& bytes) {
  ByteReader r(bytes);
  if (bytes.size() < 4 || std::string_view(bytes.data(), 4) !=
                              std::string_view(kMagic, 4)) {
    throw FormatError("not an .mdil recording (bad magic)");
  }
  r.bytes(4);
  const uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw FormatError("unsupported recording version " +
                      std::to_string(version));
  }
  r.set_error_offset(r.offset());
  const uint32_t header_len = r.u32();
  const auto header_text = r.bytes(header_len);
  nlohmann::json header_json;
  try {
    header_json = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptionError(std::string("unreadable header JSON: ") + e.what(), 8);
  }
  Recording rec(header_from_json(header_json, version));

  while (!r.at_end()) {
    const size_t record_start = r.offset();
    r.set_error_offset(record_start);
    const uint8_t tag = r.u8();
    const uint32_t len = r.u32();
    if (r.remaining() < len) {
      throw CorruptionError("truncated record", record_start);
    }
    ByteReader body(r.bytes(len));
    body.set_error_offset(record_start);
    try {
      if (tag == kFrameTag) {
        Frame f;
        f.step = body.i64();
        f.sim_time = body.f64();
        f.wall_time_ms = body.i64();
        f.potential = body.f64();
        f.kinetic = body.f64();
        const uint32_t n = body.u32();
        f.positions = read_vecs(body, n);
        f.user_forces = read_vecs(body, n);
        rec.append_frame(std::move(f));
      } else if (tag == kEventTag) {
        SharedStateEvent e;
        e.wall_time_ms = body.i64();
        e.key = std::string(body.bytes(body.u32()));
        const auto value = body.bytes(body.u32());
        e.value = nlohmann::json::parse(value);
        rec.append_event(std::move(e));
      } else {
        throw CorruptionError("unknown record tag " + std::to_string(tag),
                              record_start);
      }
    } catch (const CorruptionError&) {
      throw;
    } catch (const nlohmann::json::exception& e) {
      throw CorruptionError(std::string("bad event payload: ") + e.what(),
                            record_start);
    } catch (const Error& e) {
      throw CorruptionError(e.what(), record_start);
    }
    if (!body.at_end()) {
      throw CorruptionError("record length mismatch", record_start);
    }
  }
  return rec;
}

Recording read_recording(std::istream& in) {
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return decode_recording(bytes);
}

Recording read_recording(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_recording(in);
}

}  // namespace demoforge::recording
