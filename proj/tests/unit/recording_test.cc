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

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "demoforge/common/error.h"
#include "demoforge/common/random.h"
#include "demoforge/md/builders.h"
#include "demoforge/recording/container.h"
#include "demoforge/recording/csv.h"
#include "demoforge/recording/recording.h"
#include "demoforge/recording/replay.h"
#include "support/random_recording.h"

using namespace demoforge;
using namespace demoforge::recording;
using demoforge::testing::random_recording;
using demoforge::testing::small_topology;

namespace {

Recording nanotube_frame0() {
  const auto [t, s] = md::build_system(md::TaskId::kNanotube, 0);
  RecordingHeader h;
  h.task_id = "nanotube";
  h.topology = t;
  Recording rec(h);
  Frame f;
  f.positions = s.positions;
  f.user_forces.assign(s.positions.size(), Vec3{});
  rec.append_frame(f);
  return rec;
}

}  // namespace

TEST_CASE("append_frame keeps order and rejects a decreasing step") {
  Recording rec(RecordingHeader{});
  rec = append_frame(std::move(rec), Frame{.step = 0});
  CHECK(rec.frame_count() == 1);
  rec.append_frame(Frame{.step = 1});
  rec.append_frame(Frame{.step = 2});
  for (int i = 0; i < 3; ++i) CHECK(rec.frames()[i].step == i);
  rec.append_frame(Frame{.step = 5});
  CHECK_THROWS_AS(rec.append_frame(Frame{.step = 3}), OrderingError);
}

TEST_CASE("frames must match the topology size") {
  RecordingHeader h;
  h.topology = small_topology(2);
  Recording rec(h);
  Frame f;
  f.positions.resize(3);
  f.user_forces.resize(3);
  CHECK_THROWS_AS(rec.append_frame(f), DimensionError);
}

TEST_CASE("events must not go back in time") {
  Recording rec(RecordingHeader{});
  rec.append_event({10, "a", 1});
  CHECK_THROWS_AS(rec.append_event({5, "b", 2}), OrderingError);
}

TEST_CASE("round trip is bit exact for random recordings") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const Recording rec = random_recording(seed);
    const std::string bytes = encode_recording(rec);
    const Recording back = decode_recording(bytes);
    REQUIRE(back == rec);
    REQUIRE(encode_recording(back) == bytes);
  }
}

TEST_CASE("round trip of a 100-frame nanotube recording through a stream") {
  Recording rec = nanotube_frame0();
  for (int k = 1; k < 100; ++k) {
    Frame f = rec.frames().back();
    f.step = k * 10;
    f.wall_time_ms = k * 33;
    f.positions[60].z += 0.01;
    rec.append_frame(f);
  }
  std::stringstream ss;
  const uint64_t n = write_recording(rec, ss);
  CHECK(n == ss.str().size());
  CHECK(read_recording(ss) == rec);
}

TEST_CASE("bad magic and version are format errors") {
  std::string bytes = encode_recording(random_recording(1));
  std::string bad = bytes;
  bad.replace(0, 4, "XXXX");
  CHECK_THROWS_AS(decode_recording(bad), FormatError);
  bad = bytes;
  bad[4] = 9;
  CHECK_THROWS_AS(decode_recording(bad), FormatError);
}

TEST_CASE("truncation is a corruption error naming the record offset") {
  const Recording rec = nanotube_frame0();
  const std::string bytes = encode_recording(rec);
  const std::string cut = bytes.substr(0, bytes.size() - 100);
  try {
    decode_recording(cut);
    FAIL("expected a corruption error");
  } catch (const CorruptionError& e) {
    // The only record starts right after the header.
    const size_t header_len = bytes.size() - 1 - 4 - (8 * 5 + 4 + 65 * 6 * 8);
    CHECK(e.offset() == header_len);
  }
}

TEST_CASE("table1 CSV reproduces the published rows") {
  RecordingHeader h;
  h.topology = small_topology(2);
  h.topology.atom_names = {"C1", "H4"};
  Recording rec(h);
  Frame f;
  f.positions = {{9.725553, 14.941643, 14.158468}, {7.0092716, 18.310032, 12.723206}};
  f.user_forces = {{0, 0, 0}, {0, 0, 0}};
  rec.append_frame(f);
  const std::string csv = export_csv(rec, CsvStyle::kTable1);
  CHECK(csv ==
        "atom name,time,coordinates,user forces\n"
        "C1,0,\"[9.725553, 14.941643, 14.158468]\",\"[0.0, 0.0, 0.0]\"\n"
        "H4,0,\"[7.0092716, 18.310032, 12.723206]\",\"[0.0, 0.0, 0.0]\"\n");
}

TEST_CASE("table1 export of a frame-0 nanotube recording") {
  const std::string csv = export_csv(nanotube_frame0(), CsvStyle::kTable1);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "atom name,time,coordinates,user forces");
  std::getline(in, line);
  CHECK(line.rfind("C1,0,\"[", 0) == 0);
  CHECK(line.ends_with("\"[0.0, 0.0, 0.0]\""));
  int rows = 1;
  std::string last = line;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  CHECK(rows == 65);
  CHECK(last.rfind("H4,0,", 0) == 0);
}

TEST_CASE("table1 CSV re-parses to the exact source values") {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const Recording rec = random_recording(seed);
    if (rec.frame_count() == 0) continue;
    const auto rows = parse_table1_csv(export_csv(rec, CsvStyle::kTable1));
    size_t r = 0;
    for (size_t fi = 0; fi < rec.frame_count(); ++fi) {
      for (size_t a = 0; a < rec.frames()[fi].positions.size(); ++a, ++r) {
        REQUIRE(rows[r].frame_index == static_cast<int64_t>(fi));
        for (int d = 0; d < 3; ++d) {
          REQUIRE(std::bit_cast<uint64_t>(rows[r].coordinates[d]) ==
                  std::bit_cast<uint64_t>(rec.frames()[fi].positions[a][d]));
          REQUIRE(std::bit_cast<uint64_t>(rows[r].user_forces[d]) ==
                  std::bit_cast<uint64_t>(rec.frames()[fi].user_forces[a][d]));
        }
      }
    }
    CHECK(r == rows.size());
  }
}

TEST_CASE("long CSV has one row per atom and frame") {
  RecordingHeader h;
  h.topology = small_topology(2);
  Recording rec(h);
  for (int k = 0; k < 2; ++k) {
    rec.append_frame(Frame{.step = k, .positions = {{1, 2, 3}, {4, 5, 6}},
                           .user_forces = {{0, 0, 0}, {0.5, 0, 0}}});
  }
  const std::string csv = export_csv(rec, CsvStyle::kLong);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(csv.rfind("atom_name,step,x,y,z,fx,fy,fz\n", 0) == 0);
  CHECK(csv.find("A2,1,4.0,5.0,6.0,0.5,0.0,0.0\n") != std::string::npos);
}

TEST_CASE("exporting an empty recording fails") {
  CHECK_THROWS_AS(export_csv(Recording{}, CsvStyle::kTable1), EmptyExportError);
  CHECK_THROWS_AS(parse_csv_style("wide"), InvalidArgumentError);
}

TEST_CASE("float formatting follows Python repr") {
  CHECK(format_float(0.0) == "0.0");
  CHECK(format_float(1.0) == "1.0");
  CHECK(format_float(-2.5) == "-2.5");
  CHECK(format_float(1e-5) == "1e-05");
  CHECK(format_float(0.0001) == "0.0001");
  CHECK(format_float(1e16) == "1e+16");
  CHECK(format_float(123456789012345.0) == "123456789012345.0");
  CHECK(format_float(0.1 + 0.2) == "0.30000000000000004");
}

TEST_CASE("replay merges the streams by wall time") {
  RecordingHeader h;
  Recording rec(h);
  for (int k = 0; k < 10; ++k) rec.append_frame(Frame{.step = k, .wall_time_ms = k * 10});
  rec.append_event({35, "label/success", true});
  auto shared = std::make_shared<const Recording>(rec);
  const auto items = replay(shared, 1.0);
  REQUIRE(items.size() == 11);
  CHECK(items[3].frame->step == 3);
  CHECK(items[4].event != nullptr);
  CHECK(items[5].frame->step == 4);
  for (size_t i = 1; i < items.size(); ++i) {
    CHECK(items[i].wall_time_ms >= items[i - 1].wall_time_ms);
  }
}

TEST_CASE("replayer controls") {
  Recording rec(RecordingHeader{});
  for (int k = 0; k < 10; ++k) rec.append_frame(Frame{.step = k * 10, .wall_time_ms = k * 33});
  auto shared = std::make_shared<const Recording>(rec);
  Replayer player(shared, 1.0);

  SUBCASE("nothing plays while paused") {
    CHECK(player.advance(1000).empty());
  }
  SUBCASE("the clock releases due frames in order") {
    player.play();
    const auto first = player.advance(0);
    REQUIRE(first.size() == 1);
    CHECK(first[0].frame->step == 0);
    CHECK(player.advance(66).size() == 2);
    player.set_speed(2.0);
    CHECK(player.advance(33).size() == 2);
  }
  SUBCASE("restart returns to step 0") {
    player.next();
    player.next();
    player.restart();
    CHECK(player.next()->frame->step == 0);
  }
  SUBCASE("seek moves to the first frame at or after the step") {
    player.seek(45);
    CHECK(player.next()->frame->step == 50);
    CHECK_THROWS_AS(player.seek(91), RangeError);
  }
  SUBCASE("a bad speed is rejected") {
    CHECK_THROWS_AS(Replayer(shared, 0.0), InvalidArgumentError);
  }
  CHECK(*shared == rec);
}

TEST_CASE("atom trajectories") {
  const Recording rec = nanotube_frame0();
  const auto path = extract_atom_trajectory(rec, "C61");
  CHECK(path.size() == 1);
  CHECK(path[0].second == rec.frames()[0].positions[60]);
  CHECK_THROWS_AS(extract_atom_trajectory(rec, "C99"), LookupError);
}

TEST_CASE("episode ranges split at episode/start events") {
  Recording rec(RecordingHeader{});
  rec.append_event({0, "episode/start", 0});
  for (int k = 0; k < 3; ++k) rec.append_frame(Frame{.step = k, .wall_time_ms = k * 33});
  rec.append_event({66, "episode/end", 0});
  rec.append_event({99, "episode/start", 1});
  for (int k = 3; k < 5; ++k) rec.append_frame(Frame{.step = k, .wall_time_ms = k * 33});
  const auto ranges = episode_frame_ranges(rec);
  REQUIRE(ranges.size() == 2);
  CHECK(ranges[0] == std::pair<size_t, size_t>{0, 3});
  CHECK(ranges[1] == std::pair<size_t, size_t>{3, 5});
}
