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

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "demoforge/common/error.h"
#include "demoforge/recording/container.h"
#include "demoforge/service/cli.h"
#include "demoforge/service/protocol.h"
#include "demoforge/service/server.h"
#include "demoforge/service/session.h"

using namespace demoforge;
using namespace demoforge::service;
using nlohmann::json;
namespace fs = std::filesystem;
namespace beast = boost::beast;
namespace net = boost::asio;

namespace {

struct Inbox {
  std::vector<json> messages;
  Sink sink() {
    return [this](const std::string& s) { messages.push_back(json::parse(s)); };
  }
  std::vector<json> of_type(const std::string& type) const {
    std::vector<json> out;
    for (const auto& m : messages) {
      if (m["type"] == type) out.push_back(m);
    }
    return out;
  }
  void clear() { messages.clear(); }
};

fs::path scratch_dir() {
  const fs::path dir =
      fs::temp_directory_path() / ("demoforge_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
  args.insert(args.begin(), "demoforge");
  std::ostringstream out, err;
  const int code = cli_dispatch(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

json start_msg(const std::string& id) {
  return {{"type", "interaction_start"}, {"version", kProtocolVersion},
          {"id", id}, {"atoms", {"C61"}}, {"position", {0.0, 0.0, 5.0}},
          {"mode", "constant-pull"}, {"scale", 100.0}};
}

}  // namespace

TEST_CASE("message parsing") {
  CHECK(parse_message(R"({"type":"play"})")["type"] == "play");
  CHECK(parse_message(R"({"type":"play","version":1})")["type"] == "play");
  for (const char* bad : {"[1,2]", "{", R"({"version":1})", R"({"type":3})",
                          R"({"type":"play","version":2})"}) {
    try {
      parse_message(bad);
      FAIL("accepted " << bad);
    } catch (const ProtocolError& e) {
      CHECK(e.code() == kBadMessage);
    }
  }
  const json m = make_message("frame", {{"step", 3}});
  CHECK(m["type"] == "frame");
  CHECK(m["version"] == kProtocolVersion);
  CHECK(m["step"] == 3);
  CHECK(error_message(kInvalidRequest, "x")["code"] == "invalid_request");
}

TEST_CASE("interaction_start accepts atom names or indices") {
  Session s("a", SessionConfig{});
  const auto f = parse_interaction_start(start_msg("x"), s.topology());
  CHECK(f.atom_indices == std::vector<int>{60});
  json by_index = start_msg("y");
  by_index["atoms"] = {60};
  CHECK(parse_interaction_start(by_index, s.topology()).atom_indices == f.atom_indices);
  json bad = start_msg("z");
  bad["position"] = {1, 2};
  CHECK_THROWS_AS(parse_interaction_start(bad, s.topology()), ProtocolError);
  bad = start_msg("z");
  bad["atoms"] = {"C99"};
  CHECK_THROWS_AS(parse_interaction_start(bad, s.topology()), ProtocolError);
}

TEST_CASE("session config validation") {
  SessionConfig c;
  c.tick_ms = 0;
  CHECK_THROWS_AS(Session("a", c), InvalidArgumentError);
  c = {};
  c.task = "protein";
  CHECK_THROWS_AS(Session("a", c), UnsupportedTaskError);
}

TEST_CASE("live session lifecycle") {
  Session s("demo", SessionConfig{});
  Inbox inbox;
  const int token = s.subscribe(inbox.sink());
  REQUIRE(inbox.messages.size() == 2);
  CHECK(inbox.messages[0]["type"] == "hello");
  CHECK(inbox.messages[0]["mode"] == "live");
  CHECK(inbox.messages[1]["type"] == "topology");
  CHECK(inbox.messages[1]["atom_names"].size() == 65);
  inbox.clear();

  s.tick();
  s.tick();
  auto frames = inbox.of_type("frame");
  REQUIRE(frames.size() == 2);
  CHECK(frames[0]["step"] == 0);
  CHECK(frames[1]["step"] == 10);
  CHECK(frames[0]["positions"].size() == 65 * 3);
  CHECK(frames[1]["wall_time_ms"].get<int64_t>() > frames[0]["wall_time_ms"].get<int64_t>());

  Inbox reply;
  SUBCASE("interactions show up as user forces") {
    s.handle_message(start_msg("hand").dump(), reply.sink());
    CHECK(reply.messages.empty());
    CHECK(s.interactions().size() == 1);
    inbox.clear();
    s.tick();
    const auto f = inbox.of_type("frame").at(0);
    CHECK(f["user_forces"][60 * 3 + 2].get<double>() > 0.0);
    CHECK(f["user_forces"][0].get<double>() == 0.0);

    s.handle_message(start_msg("hand").dump(), reply.sink());
    CHECK(reply.of_type("error").at(0)["code"] == "bad_message");
    s.handle_message(R"({"type":"interaction_update","id":"hand","position":[1,1,1]})",
                     reply.sink());
    CHECK(s.interactions().at("hand").controller_position == Vec3{1, 1, 1});
    s.handle_message(R"({"type":"interaction_end","id":"hand"})", reply.sink());
    CHECK(s.interactions().empty());
  }
  SUBCASE("unknown interactions and messages are reported, not thrown") {
    s.handle_message(R"({"type":"interaction_update","id":"nope"})", reply.sink());
    s.handle_message(R"({"type":"dance"})", reply.sink());
    s.handle_message("not json", reply.sink());
    s.handle_message(R"({"type":"seek","step":0})", reply.sink());
    const auto errors = reply.of_type("error");
    REQUIRE(errors.size() == 4);
    CHECK(errors[0]["code"] == "unknown_interaction");
    CHECK(errors[1]["code"] == "bad_message");
    CHECK(errors[2]["code"] == "bad_message");
    CHECK(errors[3]["code"] == "invalid_request");
  }
  SUBCASE("pause stops frames and restart bumps the epoch") {
    s.handle_message(R"({"type":"pause"})", reply.sink());
    inbox.clear();
    s.tick();
    CHECK(inbox.of_type("frame").empty());
    s.handle_message(R"({"type":"restart"})", reply.sink());
    s.handle_message(R"({"type":"play"})", reply.sink());
    s.tick();
    const auto f = inbox.of_type("frame").at(0);
    CHECK(f["step"] == 0);
    CHECK(f["epoch"] == 1);
  }
  s.unsubscribe(token);
  CHECK(s.subscriber_count() == 0);
}

TEST_CASE("session recording and playback") {
  const fs::path path = scratch_dir() / "session.mdil";
  Session live("rec", SessionConfig{});
  Inbox reply;
  live.handle_message(json{{"type", "record_start"}, {"path", path.string()}}.dump(),
                      reply.sink());
  live.tick();
  live.handle_message(start_msg("hand").dump(), reply.sink());
  live.tick();
  live.handle_message(R"({"type":"state_update","key":"label/success","value":true})",
                      reply.sink());
  live.tick();
  live.handle_message(R"({"type":"restart"})", reply.sink());
  CHECK(reply.of_type("error").at(0)["code"] == "invalid_request");
  live.handle_message(R"({"type":"record_stop"})", reply.sink());
  const json done = reply.of_type("recording").at(0);
  CHECK(done["frames"] == 3);
  CHECK(done["bytes"] == fs::file_size(path));

  auto rec = std::make_shared<const recording::Recording>(recording::read_recording(path));
  CHECK(rec->header().metadata["source"] == "human");
  std::vector<std::string> keys;
  for (const auto& e : rec->events()) keys.push_back(e.key);
  CHECK(keys == std::vector<std::string>{"recording/start", "interaction/start",
                                         "label/success", "recording/stop"});
  CHECK(rec->frames()[2].user_forces[60].z > 0.0);

  Session play("play", SessionConfig{}, rec);
  Inbox inbox;
  play.subscribe(inbox.sink());
  CHECK(inbox.messages[0]["mode"] == "playback");
  inbox.clear();
  play.tick();
  CHECK(inbox.messages.empty());  // starts paused

  Inbox errs;
  play.handle_message(start_msg("x").dump(), errs.sink());
  play.handle_message(json{{"type", "record_start"}, {"path", "x.mdil"}}.dump(), errs.sink());
  play.handle_message(R"({"type":"seek","step":1000})", errs.sink());
  REQUIRE(errs.messages.size() == 3);
  CHECK(errs.messages[0]["code"] == "playback_readonly");
  CHECK(errs.messages[1]["code"] == "playback_readonly");
  CHECK(errs.messages[2]["code"] == "invalid_request");

  play.handle_message(R"({"type":"play"})", errs.sink());
  for (int i = 0; i < 5; ++i) play.tick();
  const auto frames = inbox.of_type("frame");
  REQUIRE(frames.size() == 3);
  CHECK(frames[2]["step"] == 20);
  CHECK(inbox.of_type("state_update").size() == 4);

  inbox.clear();
  play.handle_message(R"({"type":"seek","step":10})", errs.sink());
  play.tick();
  const auto after = inbox.of_type("frame");
  REQUIRE_FALSE(after.empty());
  CHECK(after[0]["step"] == 10);
  CHECK(after[0]["epoch"] == 1);
  // Playback never altered the recording.
  CHECK(*rec == recording::read_recording(path));
}

TEST_CASE("websocket sessions over a real socket") {
  ServerConfig cfg;
  cfg.port = 0;
  cfg.session.tick_ms = 10;
  Server server(cfg);
  server.start();
  REQUIRE(server.port() != 0);

  net::io_context ioc;
  net::ip::tcp::resolver resolver(ioc);
  beast::websocket::stream<net::ip::tcp::socket> ws(ioc);
  const auto endpoints = resolver.resolve("127.0.0.1", std::to_string(server.port()));
  net::connect(ws.next_layer(), endpoints);
  ws.handshake("127.0.0.1", "/session/alpha");

  auto next = [&ws] {
    beast::flat_buffer buf;
    ws.read(buf);
    return json::parse(beast::buffers_to_string(buf.data()));
  };
  CHECK(next()["type"] == "hello");
  CHECK(next()["type"] == "topology");
  CHECK(next()["type"] == "frame");

  ws.write(net::buffer(std::string(R"({"type":"interaction_update","id":"ghost"})")));
  bool got_error = false;
  for (int i = 0; i < 200 && !got_error; ++i) {
    const json m = next();
    if (m["type"] == "error") {
      CHECK(m["code"] == "unknown_interaction");
      got_error = true;
    }
  }
  CHECK(got_error);
  ws.close(beast::websocket::close_code::normal);

  // Anything but /session/{id} is refused.
  net::ip::tcp::socket sock(ioc);
  net::connect(sock, endpoints);
  beast::http::request<beast::http::empty_body> req{beast::http::verb::get, "/other", 11};
  req.set(beast::http::field::host, "127.0.0.1");
  beast::http::write(sock, req);
  beast::flat_buffer buf;
  beast::http::response<beast::http::string_body> res;
  beast::http::read(sock, buf, res);
  CHECK(res.result_int() == 404);

  server.stop();
}

TEST_CASE("a busy port is a startup error") {
  ServerConfig cfg;
  cfg.port = 0;
  Server first(cfg);
  cfg.port = first.port();
  CHECK_THROWS_AS(Server{cfg}, Error);
}

TEST_CASE("seed lists") {
  CHECK(parse_seed_list("3..6") == std::vector<uint64_t>{3, 4, 5, 6});
  CHECK(parse_seed_list("1,5,2") == std::vector<uint64_t>{1, 5, 2});
  CHECK_THROWS_AS(parse_seed_list("6..3"), InvalidArgumentError);
  CHECK_THROWS_AS(parse_seed_list("x"), InvalidArgumentError);
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli({}) == kExitUsage);
  CHECK(run_cli({"no-such-command"}) == kExitUsage);
  CHECK(run_cli({"simulate", "--task", "protein"}) == kExitUsage);
  CHECK(run_cli({"export-csv", (scratch_dir() / "missing.mdil").string()}) == kExitUsage);
  const fs::path junk = scratch_dir() / "junk.mdil";
  std::ofstream(junk) << "not a recording";
  CHECK(run_cli({"export-csv", junk.string()}) == kExitRuntime);
}

TEST_CASE("cli pipeline: demos, training, evaluation and export") {
  const fs::path dir = scratch_dir();
  const std::string demos = (dir / "demos.mdil").string();
  REQUIRE(run_cli({"expert-demos", "--episodes", "3", "--out", demos}) == kExitOk);

  std::string out;
  REQUIRE(run_cli({"export-csv", demos, "--frames", "1"}, &out) == kExitOk);
  CHECK(out.rfind("atom name,time,coordinates,user forces\nC1,0,\"[", 0) == 0);

  const std::string a = (dir / "a.dfnn").string();
  const std::string b = (dir / "b.dfnn").string();
  for (const auto& ckpt : {a, b}) {
    REQUIRE(run_cli({"train", "bc", "--demos", demos, "--epochs", "5", "--seed", "3",
                     "--out", ckpt}) == kExitOk);
  }
  CHECK(read_file(a) == read_file(b));
  const json manifest = json::parse(read_file(a + ".manifest.json"));
  CHECK(manifest["seed"] == 3);

  REQUIRE(run_cli({"eval", "--policy", "expert", "--seeds", "0..3"}, &out) == kExitOk);
  const json report = json::parse(out);
  CHECK(report["episodes"] == 4);
  CHECK(report["success_rate"] == 1.0);
  REQUIRE(run_cli({"eval", "--policy", a, "--seeds", "0,1"}, &out) == kExitOk);
  CHECK(json::parse(out).contains("success_rate"));

  REQUIRE(run_cli({"plot-trajectory", demos}, &out) == kExitOk);
  CHECK(out.rfind("<svg", 0) == 0);
  CHECK(std::count(out.begin(), out.end(), '\n') > 3);

  REQUIRE(run_cli({"replay", demos, "--limit", "3"}, &out) == kExitOk);
  // The topology message and then three stream items.
  CHECK(std::count(out.begin(), out.end(), '\n') == 4);
  CHECK(out.rfind("{\"angles\"", 0) == 0);
}

TEST_CASE("cli aggregate-woc on a synthetic crowd") {
  std::string out;
  REQUIRE(run_cli({"aggregate-woc", "--synthetic", "50"}, &out) == kExitOk);
  const json r = json::parse(out);
  CHECK(r["aggregate_error"].get<double>() < r["median_individual_error"].get<double>());
  CHECK(run_cli({"aggregate-woc"}) == kExitUsage);
}

TEST_CASE("cli irl writes the recovered reward") {
  const std::string path = (scratch_dir() / "irl.json").string();
  REQUIRE(run_cli({"train", "irl", "--out", path}) == kExitOk);
  const json r = json::parse(read_file(path));
  CHECK(r["theta"].size() == 25);
}
