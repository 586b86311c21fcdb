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

#include "demoforge/service/cli.h"

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "demoforge/common/error.h"
#include "demoforge/env/expert.h"
#include "demoforge/env/rollout.h"
#include "demoforge/il/actor.h"
#include "demoforge/il/bc.h"
#include "demoforge/il/dagger.h"
#include "demoforge/il/dataset.h"
#include "demoforge/il/gail.h"
#include "demoforge/il/mdp.h"
#include "demoforge/il/woc.h"
#include "demoforge/md/builders.h"
#include "demoforge/nn/checkpoint.h"
#include "demoforge/recording/container.h"
#include "demoforge/recording/csv.h"
#include "demoforge/recording/replay.h"
#include "demoforge/service/protocol.h"
#include "demoforge/service/server.h"
#include "demoforge/service/svg.h"

namespace demoforge::service {
namespace {

using nlohmann::json;

void write_text(const std::string& path, const std::string& text,
                std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error("failed to write " + path);
}

void write_json(const std::string& path, const json& j, std::ostream& out) {
  write_text(path, j.dump(2) + "\n", out);
}

// Task options shared by the rollout-based commands.
struct TaskOptions {
  std::string task = "nanotube";
  double jitter = 0.1;
  int max_steps = 2000;

  void add(CLI::App* cmd) {
    cmd->add_option("--task", task, "nanotube or alanine17")
        ->capture_default_str();
    cmd->add_option("--jitter", jitter, "start jitter half-width (nm)")
        ->capture_default_str();
    cmd->add_option("--max-steps", max_steps, "control steps per episode")
        ->capture_default_str();
  }

  env::TaskConfig config() const {
    env::TaskConfig c;
    c.task = md::parse_task_id(task);
    c.jitter = jitter;
    c.max_steps = max_steps;
    return c;
  }
};

// GaussianActor that owns the policy it reads.
class CheckpointActor : public env::Policy {
 public:
  CheckpointActor(nn::GaussianPolicy policy, il::GaussianActor::Mode mode)
      : policy_(std::move(policy)), actor_(policy_, mode) {}
  void begin_episode(uint64_t seed) override { actor_.begin_episode(seed); }
  env::Decision act(const env::Observation& obs, int t) override {
    return actor_.act(obs, t);
  }

 private:
  nn::GaussianPolicy policy_;
  il::GaussianActor actor_;
};

// "expert", "random" or a checkpoint path.
std::unique_ptr<env::Policy> make_rollout_policy(const std::string& spec,
                                                 const env::TaskConfig& task,
                                                 bool sample) {
  if (spec == "expert") {
    if (task.task != md::TaskId::kNanotube) {
      throw UnsupportedTaskError("the scripted expert needs the nanotube task");
    }
    return std::make_unique<env::ExpertPolicy>(
        env::default_expert_config(task.build.tube));
  }
  if (spec == "random") return std::make_unique<env::RandomPolicy>(task.max_force);
  return std::make_unique<CheckpointActor>(
      nn::load_policy(spec), sample ? il::GaussianActor::Mode::kSample
                                    : il::GaussianActor::Mode::kMean);
}

json rollout_summary(const std::vector<env::Trajectory>& trajs) {
  int successes = 0;
  double steps = 0.0;
  json per = json::array();
  for (const auto& t : trajs) {
    successes += t.success ? 1 : 0;
    steps += static_cast<double>(t.size());
    per.push_back({{"seed", t.seed}, {"success", t.success}, {"steps", t.size()}});
  }
  const double n = static_cast<double>(trajs.size());
  return {{"episodes", trajs.size()},
          {"successes", successes},
          {"success_rate", n > 0 ? successes / n : 0.0},
          {"mean_steps", n > 0 ? steps / n : 0.0},
          {"per_episode", per}};
}

std::string manifest_path(const std::string& explicit_path,
                          const std::string& checkpoint) {
  if (!explicit_path.empty()) return explicit_path;
  return checkpoint + ".manifest.json";
}

json bc_config_json(const il::BcConfig& c) {
  return {{"loss", c.loss == nn::LossKind::kMse ? "mse" : "nll"},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"lr", c.lr},
          {"val_fraction", c.val_fraction}};
}

json bc_metrics(const il::BcResult& r) {
  json epochs = json::array();
  for (size_t e = 0; e < r.train_losses.size(); ++e) {
    json row = {{"epoch", e + 1}, {"train_loss", r.train_losses[e]}};
    if (e < r.validation_losses.size()) {
      row["validation_loss"] = r.validation_losses[e];
    }
    epochs.push_back(row);
  }
  return epochs;
}

std::vector<Vec3> atom_path(const recording::Recording& rec, int atom,
                            std::pair<size_t, size_t> range,
                            const env::TubeFrame& frame) {
  std::vector<Vec3> out;
  for (size_t i = range.first; i < range.second; ++i) {
    out.push_back(frame.to_local(rec.frames()[i].positions[atom]));
  }
  return out;
}

env::TubeFrame recording_frame(const recording::Recording& rec) {
  const md::NanotubeGeometry geometry;
  return env::tube_frame(rec.header().topology, geometry.carbons_per_ring);
}

std::vector<Vec3> tube_axis(const env::TubeFrame& frame) {
  return {{0.0, 0.0, frame.entrance - 0.5}, {0.0, 0.0, frame.exit + 0.5}};
}

std::atomic<Server*> g_server{nullptr};

void on_signal(int) {
  if (Server* s = g_server.load()) s->stop();
}

}  // namespace

std::vector<uint64_t> parse_seed_list(const std::string& text) {
  std::vector<uint64_t> out;
  auto number = [&](const std::string& s) {
    size_t used = 0;
    uint64_t v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size() || s.front() == '-') {
      throw InvalidArgumentError("bad seed '" + s + "'");
    }
    return v;
  };
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const uint64_t a = number(text.substr(0, dots));
    const uint64_t b = number(text.substr(dots + 2));
    if (b < a) throw InvalidArgumentError("empty seed range " + text);
    for (uint64_t s = a; s <= b; ++s) out.push_back(s);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number(item));
  if (out.empty()) throw InvalidArgumentError("no seeds given");
  return out;
}

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  CLI::App app{"Interactive MD, demonstration recording and imitation learning"};
  app.name(args.empty() ? "demoforge" : args[0]);
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file; flags win over it")
      ->envname("DEMOFORGE_CONFIG");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run plain MD and report energies");
  std::string sim_task = "nanotube", sim_out;
  uint64_t sim_seed = 0;
  int sim_steps = 1000, sim_interval = 10;
  double sim_gamma = 0.0, sim_temperature = 300.0;
  simulate->add_option("--task", sim_task)->capture_default_str();
  simulate->add_option("--seed", sim_seed)->capture_default_str();
  simulate->add_option("--steps", sim_steps)->capture_default_str();
  simulate->add_option("--gamma", sim_gamma, "Langevin friction (1/ps), 0 = NVE")
      ->capture_default_str();
  simulate->add_option("--temperature", sim_temperature)->capture_default_str();
  simulate->add_option("--out", sim_out, "write an .mdil recording");
  simulate->add_option("--frame-interval", sim_interval)->capture_default_str();

  // serve
  auto* serve = app.add_subcommand("serve", "WebSocket session service");
  ServerConfig server_cfg;
  std::string serve_recording;
  serve->add_option("--host", server_cfg.host)->capture_default_str();
  serve->add_option("--port", server_cfg.port)->capture_default_str();
  serve->add_option("--task", server_cfg.session.task)->capture_default_str();
  serve->add_option("--seed", server_cfg.session.seed)->capture_default_str();
  serve->add_option("--steps-per-tick", server_cfg.session.steps_per_tick)
      ->capture_default_str();
  serve->add_option("--tick-ms", server_cfg.session.tick_ms)->capture_default_str();
  serve->add_option("--frame-subsample", server_cfg.session.frame_subsample)
      ->capture_default_str();
  serve->add_option("--gamma", server_cfg.session.langevin_gamma)
      ->capture_default_str();
  serve->add_option("--temperature", server_cfg.session.temperature)
      ->capture_default_str();
  serve->add_option("--speed", server_cfg.session.playback_speed)
      ->capture_default_str();
  serve->add_option("--recording", serve_recording,
                    "serve this recording in playback mode");
  serve->add_option("--threads", server_cfg.threads)->capture_default_str();

  // record / expert-demos
  auto* record = app.add_subcommand("record", "record policy rollouts to .mdil");
  TaskOptions record_task;
  record_task.add(record);
  std::string record_policy = "expert", record_out, record_tensor;
  uint64_t record_seed = 0;
  int record_episodes = 1;
  bool record_sample = false;
  record->add_option("--policy", record_policy, "expert, random or a checkpoint")
      ->capture_default_str();
  record->add_option("--seed", record_seed, "first episode seed")
      ->capture_default_str();
  record->add_option("--episodes", record_episodes)->capture_default_str();
  record->add_flag("--sample", record_sample, "sample instead of mean actions");
  record->add_option("--out", record_out)->required();
  record->add_option("--tensor", record_tensor, "also write a tensor file");

  auto* demos = app.add_subcommand("expert-demos", "scripted expert demonstrations");
  TaskOptions demos_task;
  demos_task.add(demos);
  std::string demos_out, demos_tensor;
  uint64_t demos_seed = 0;
  int demos_episodes = 200, demos_horizon = 0;
  demos->add_option("--episodes", demos_episodes)->capture_default_str();
  demos->add_option("--seed", demos_seed, "first episode seed")->capture_default_str();
  demos->add_option("--horizon", demos_horizon,
                    "fixed episode length without early success stop (GAIL data)");
  demos->add_option("--out", demos_out)->required();
  demos->add_option("--tensor", demos_tensor, "also write a tensor file");

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "print a recording as wire messages");
  std::string replay_in;
  double replay_speed = 1.0;
  int64_t replay_limit = -1;
  replay_cmd->add_option("recording", replay_in)->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--speed", replay_speed)->capture_default_str();
  replay_cmd->add_option("--limit", replay_limit, "stop after this many frame or event messages");

  // export-csv
  auto* export_cmd = app.add_subcommand("export-csv", "export frames as CSV");
  std::string export_in, export_style = "table1", export_out;
  int64_t export_frames = -1;
  export_cmd->add_option("recording", export_in)->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--style", export_style, "table1 or long")
      ->capture_default_str();
  export_cmd->add_option("--out", export_out, "default stdout");
  export_cmd->add_option("--frames", export_frames, "export only the first N frames");

  // plot-trajectory
  auto* plot = app.add_subcommand("plot-trajectory", "SVG of per-attempt atom paths");
  std::string plot_in, plot_atom = "C61", plot_out;
  plot->add_option("recording", plot_in)->required()->check(CLI::ExistingFile);
  plot->add_option("--atom", plot_atom)->capture_default_str();
  plot->add_option("--out", plot_out, "default stdout");

  // train
  auto* train = app.add_subcommand("train", "train an imitation learner");
  train->require_subcommand(1);
  uint64_t train_seed = 0;
  std::string train_out, train_manifest;
  TaskOptions train_task;
  std::vector<int> hidden{64, 64};

  auto* train_bc = train->add_subcommand("bc", "behavioural cloning");
  std::string bc_demos, bc_loss = "mse";
  il::BcConfig bc_cfg;
  train_bc->add_option("--demos", bc_demos, ".mdil recording or tensor file")
      ->required()
      ->check(CLI::ExistingFile);
  train_bc->add_option("--loss", bc_loss, "mse or nll")->capture_default_str();
  train_bc->add_option("--epochs", bc_cfg.epochs)->capture_default_str();
  train_bc->add_option("--batch-size", bc_cfg.batch_size)->capture_default_str();
  train_bc->add_option("--lr", bc_cfg.lr)->capture_default_str();

  auto* train_gail = train->add_subcommand("gail", "adversarial imitation");
  std::string gail_demos;
  il::GailConfig gail_cfg;
  int gail_expert_episodes = 200;
  train_gail->add_option("--demos", gail_demos,
                         "fixed-horizon expert data; generated when omitted");
  train_gail->add_option("--expert-episodes", gail_expert_episodes)
      ->capture_default_str();
  train_gail->add_option("--iterations", gail_cfg.iterations)->capture_default_str();
  train_gail->add_option("--episodes-per-iteration", gail_cfg.episodes_per_iteration)
      ->capture_default_str();
  train_gail->add_option("--horizon", gail_cfg.horizon)->capture_default_str();
  train_gail->add_option("--lambda", gail_cfg.pg.lambda, "entropy weight")
      ->capture_default_str();

  auto* train_irl = train->add_subcommand("irl", "MaxEnt IRL on the corner-goal gridworld");
  int irl_size = 5, irl_iterations = 500, irl_episodes = 2500;
  double irl_lr = 3.0;
  train_irl->add_option("--size", irl_size)->capture_default_str();
  train_irl->add_option("--iterations", irl_iterations)->capture_default_str();
  train_irl->add_option("--lr", irl_lr)->capture_default_str();
  train_irl->add_option("--episodes", irl_episodes)->capture_default_str();

  auto* train_dagger = train->add_subcommand("dagger", "dataset aggregation");
  il::DaggerConfig dagger_cfg = il::default_dagger_config();
  train_dagger->add_option("--rounds", dagger_cfg.rounds)->capture_default_str();
  train_dagger->add_option("--episodes-per-round", dagger_cfg.episodes_per_round)
      ->capture_default_str();
  train_dagger->add_option("--learner-jitter", dagger_cfg.learner_task.jitter)
      ->capture_default_str();
  train_dagger->add_option("--learner-max-steps", dagger_cfg.learner_max_steps)
      ->capture_default_str();
  train_dagger->add_option("--epochs", dagger_cfg.bc.epochs)->capture_default_str();

  for (auto* cmd : {train_bc, train_gail, train_irl, train_dagger}) {
    cmd->add_option("--seed", train_seed)->capture_default_str();
    cmd->add_option("--out", train_out, "checkpoint (JSON for irl)")->required();
    cmd->add_option("--manifest", train_manifest,
                    "run manifest, default <out>.manifest.json");
  }
  for (auto* cmd : {train_bc, train_gail}) {
    train_task.add(cmd);
    cmd->add_option("--hidden", hidden, "hidden layer sizes")->expected(1, -1);
  }

  // eval
  auto* eval = app.add_subcommand("eval", "success rate of a policy");
  TaskOptions eval_task;
  eval_task.add(eval);
  std::string eval_policy, eval_seeds = "0..99", eval_out;
  bool eval_sample = false;
  eval->add_option("--policy", eval_policy, "checkpoint, expert or random")->required();
  eval->add_option("--seeds", eval_seeds, "a..b or a,b,c")->capture_default_str();
  eval->add_flag("--sample", eval_sample, "sample instead of mean actions");
  eval->add_option("--out", eval_out, "default stdout");

  // aggregate-woc
  auto* woc = app.add_subcommand("aggregate-woc", "wisdom-of-the-crowd path aggregation");
  std::vector<std::string> woc_inputs;
  int woc_synthetic = 0;
  double woc_sigma = 0.1;
  uint64_t woc_seed = 0;
  std::string woc_atom = "C61", woc_out, woc_svg;
  woc->add_option("recordings", woc_inputs, "rollout or session recordings");
  woc->add_option("--synthetic", woc_synthetic, "use N synthetic noisy paths");
  woc->add_option("--sigma", woc_sigma, "synthetic lateral noise (nm)")
      ->capture_default_str();
  woc->add_option("--seed", woc_seed)->capture_default_str();
  woc->add_option("--atom", woc_atom)->capture_default_str();
  woc->add_option("--out", woc_out, "default stdout");
  woc->add_option("--svg", woc_svg, "plot the paths and the aggregate");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  if (!argv_rev.empty()) argv_rev.pop_back();
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*simulate) {
      auto [topology, state] = md::build_system(sim_task, sim_seed);
      const md::Thermostat thermostat =
          sim_gamma > 0.0
              ? md::Thermostat::langevin(sim_gamma, sim_temperature, sim_seed)
              : md::Thermostat::none();
      md::Simulation sim(topology, state, md::kDefaultTimestep, thermostat);
      std::optional<recording::Recording> rec;
      if (!sim_out.empty()) {
        recording::RecordingHeader h;
        h.task_id = sim_task;
        h.topology = topology;
        h.seed = sim_seed;
        h.frame_interval = sim_interval;
        h.metadata = {{"source", "simulate"}};
        rec.emplace(std::move(h));
      }
      const double e0 = sim.energies().total();
      for (int s = 0; s <= sim_steps; ++s) {
        if (rec && s % sim_interval == 0) {
          recording::Frame f;
          f.step = s;
          f.sim_time = sim.state().time;
          f.wall_time_ms = static_cast<int64_t>(s / sim_interval) * env::kRolloutTickMs;
          f.positions = sim.state().positions;
          f.user_forces = sim.forces().user_forces;
          const auto e = sim.energies();
          f.potential = e.potential;
          f.kinetic = e.kinetic;
          rec->append_frame(std::move(f));
        }
        if (s < sim_steps) sim.step();
      }
      const auto e1 = sim.energies();
      json report = {{"task", sim_task},
                     {"atoms", topology.atom_count()},
                     {"steps", sim_steps},
                     {"initial_total_energy", e0},
                     {"final_total_energy", e1.total()},
                     {"final_kinetic", e1.kinetic},
                     {"final_potential", e1.potential},
                     {"relative_drift", std::abs(e1.total() - e0) /
                                            std::max(std::abs(e0), 1e-12)}};
      if (rec) {
        report["bytes"] = recording::write_recording(*rec, sim_out);
        report["frames"] = rec->frame_count();
        report["out"] = sim_out;
      }
      out << report.dump(2) << "\n";
    } else if (*serve) {
      if (!serve_recording.empty()) server_cfg.recording = serve_recording;
      Server server(server_cfg);
      out << "listening on ws://" << server_cfg.host << ":" << server.port()
          << "/session/{id}" << std::endl;
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.run();
      g_server = nullptr;
    } else if (*record || *demos) {
      const bool is_demo = static_cast<bool>(*demos);
      env::TaskConfig task = (is_demo ? demos_task : record_task).config();
      const int episodes = is_demo ? demos_episodes : record_episodes;
      const uint64_t seed = is_demo ? demos_seed : record_seed;
      int max_steps = task.max_steps;
      if (is_demo && demos_horizon > 0) {
        task.terminate_on_success = false;
        max_steps = demos_horizon;
      }
      if (episodes < 1) throw InvalidArgumentError("--episodes must be >= 1");
      auto policy = make_rollout_policy(is_demo ? "expert" : record_policy, task,
                                        !is_demo && record_sample);
      recording::Recording rec(env::rollout_header(task, seed));
      rec.header().metadata["policy"] = is_demo ? "expert" : record_policy;
      std::vector<env::Trajectory> trajs;
      for (int k = 0; k < episodes; ++k) {
        trajs.push_back(env::rollout(*policy, task, seed + k, max_steps, &rec));
      }
      const std::string& path = is_demo ? demos_out : record_out;
      json report = rollout_summary(trajs);
      report.erase("per_episode");
      report["bytes"] = recording::write_recording(rec, path);
      report["frames"] = rec.frame_count();
      report["events"] = rec.event_count();
      report["out"] = path;
      const std::string& tensor = is_demo ? demos_tensor : record_tensor;
      if (!tensor.empty()) {
        il::write_tensor_file(tensor, il::dataset_from_trajectories(trajs));
        report["tensor"] = tensor;
      }
      out << report.dump(2) << "\n";
    } else if (*replay_cmd) {
      auto rec = std::make_shared<const recording::Recording>(
          recording::read_recording(replay_in));
      out << topology_message(rec->header().task_id, rec->header().topology).dump()
          << "\n";
      int64_t sent = 0;
      for (const auto& item : recording::replay(rec, replay_speed)) {
        if (replay_limit >= 0 && sent >= replay_limit) break;
        out << (item.frame ? frame_message(*item.frame, 0)
                           : state_update_message(*item.event))
                   .dump()
            << "\n";
        ++sent;
      }
    } else if (*export_cmd) {
      recording::Recording rec = recording::read_recording(export_in);
      if (export_frames >= 0) {
        recording::Recording cut(rec.header());
        for (int64_t i = 0;
             i < export_frames && i < static_cast<int64_t>(rec.frame_count()); ++i) {
          cut.append_frame(rec.frames()[i]);
        }
        rec = std::move(cut);
      }
      write_text(export_out,
                 recording::export_csv(rec, recording::parse_csv_style(export_style)),
                 out);
    } else if (*plot) {
      const recording::Recording rec = recording::read_recording(plot_in);
      const int atom = rec.header().topology.index_of(plot_atom);
      const env::TubeFrame frame = recording_frame(rec);
      std::vector<std::vector<Vec3>> attempts;
      for (const auto& range : recording::episode_frame_ranges(rec)) {
        attempts.push_back(atom_path(rec, atom, range, frame));
      }
      write_text(plot_out,
                 trajectory_svg(attempts, frame, {},
                                plot_atom + " path per attempt"),
                 out);
    } else if (*train) {
      json manifest = {{"seed", train_seed}, {"checkpoint", train_out}};
      const auto t0 = std::chrono::steady_clock::now();
      if (*train_bc) {
        bc_cfg.loss = nn::parse_loss_kind(bc_loss);
        const env::TaskConfig task = train_task.config();
        const il::ExpertDataset data = il::load_dataset(bc_demos);
        const il::BcResult r =
            il::bc_train(data, il::make_policy(task, hidden, train_seed), bc_cfg,
                         train_seed);
        nn::save_policy(train_out, r.policy, train_seed,
                        {{"algorithm", "bc"}, {"demos", bc_demos}});
        manifest["algorithm"] = "bc";
        manifest["config"] = bc_config_json(bc_cfg);
        manifest["config"]["hidden"] = hidden;
        manifest["demos"] = bc_demos;
        manifest["rows"] = data.size();
        manifest["metrics"] = bc_metrics(r);
      } else if (*train_gail) {
        const env::TaskConfig task = train_task.config();
        gail_cfg.policy_hidden = hidden;
        const il::ExpertDataset data =
            gail_demos.empty()
                ? il::fixed_horizon_demos(
                      task, env::default_expert_config(task.build.tube),
                      gail_expert_episodes, gail_cfg.horizon, 0)
                : il::load_dataset(gail_demos);
        const il::GailResult r = il::gail_train(task, data, gail_cfg, train_seed);
        nn::save_policy(train_out, r.policy, train_seed, {{"algorithm", "gail"}});
        json iterations = json::array();
        for (size_t i = 0; i < r.history.size(); ++i) {
          const auto& h = r.history[i];
          iterations.push_back({{"iteration", i + 1},
                                {"discriminator_accuracy", h.discriminator_accuracy},
                                {"mean_cost", h.mean_cost},
                                {"success_rate", h.success_rate},
                                {"occupancy_gap", h.occupancy_gap},
                                {"entropy", h.entropy}});
        }
        manifest["algorithm"] = "gail";
        manifest["config"] = {{"iterations", gail_cfg.iterations},
                              {"episodes_per_iteration",
                               gail_cfg.episodes_per_iteration},
                              {"horizon", gail_cfg.horizon},
                              {"discriminator_steps", gail_cfg.discriminator_steps},
                              {"discriminator_lr", gail_cfg.discriminator_lr},
                              {"lambda", gail_cfg.pg.lambda},
                              {"clip", gail_cfg.pg.clip},
                              {"policy_lr", gail_cfg.pg.lr},
                              {"hidden", hidden}};
        manifest["demos"] = gail_demos.empty() ? json("generated") : json(gail_demos);
        manifest["metrics"] = iterations;
      } else if (*train_irl) {
        const il::IrlBenchmark bench =
            il::corner_goal_benchmark(irl_size, irl_episodes, 20, train_seed + 7);
        const il::IrlResult r =
            il::maxent_irl(bench.mdp, bench.demonstrations, irl_iterations, irl_lr);
        const double match = il::greedy_match_rate(bench.mdp, r.theta);
        json result = {{"theta", r.theta},
                       {"max_feature_gap", r.max_feature_gap},
                       {"greedy_match_rate", match}};
        write_json(train_out, result, out);
        manifest["algorithm"] = "irl";
        manifest["config"] = {{"size", irl_size},
                              {"iterations", irl_iterations},
                              {"lr", irl_lr},
                              {"episodes", irl_episodes}};
        json trace = json::array();
        for (size_t i = 0; i < r.theta_trace.size(); ++i) {
          trace.push_back({{"iteration", i + 1}, {"theta", r.theta_trace[i]}});
        }
        manifest["metrics"] = trace;
        manifest["greedy_match_rate"] = match;
      } else if (*train_dagger) {
        const il::DaggerResult r = il::dagger_train(dagger_cfg, train_seed);
        nn::save_policy(train_out, r.policy, train_seed, {{"algorithm", "dagger"}});
        json rounds = json::array();
        for (size_t i = 0; i < r.fits.size(); ++i) {
          const auto& fit = r.fits[i];
          rounds.push_back(
              {{"round", i + 1},
               {"rows", r.datasets[i].size()},
               {"learner_episode_steps", r.rollout_lengths[i]},
               {"final_train_loss",
                fit.train_losses.empty() ? 0.0 : fit.train_losses.back()}});
        }
        manifest["algorithm"] = "dagger";
        manifest["config"] = {{"rounds", dagger_cfg.rounds},
                              {"episodes_per_round", dagger_cfg.episodes_per_round},
                              {"learner_jitter", dagger_cfg.learner_task.jitter},
                              {"learner_max_steps", dagger_cfg.learner_max_steps},
                              {"bc", bc_config_json(dagger_cfg.bc)}};
        manifest["metrics"] = rounds;
      }
      manifest["seconds"] = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
      const std::string mpath = manifest_path(train_manifest, train_out);
      write_json(mpath, manifest, out);
      if (!*train_irl) {
        out << json({{"checkpoint", train_out}, {"manifest", mpath}}).dump() << "\n";
      }
    } else if (*eval) {
      const env::TaskConfig task = eval_task.config();
      auto policy = make_rollout_policy(eval_policy, task, eval_sample);
      std::vector<env::Trajectory> trajs;
      for (uint64_t s : parse_seed_list(eval_seeds)) {
        trajs.push_back(env::rollout(*policy, task, s, task.max_steps));
      }
      json report = rollout_summary(trajs);
      report["policy"] = eval_policy;
      report["jitter"] = task.jitter;
      write_json(eval_out, report, out);
    } else if (*woc) {
      env::TubeFrame frame;
      std::vector<il::Path> paths;
      if (woc_synthetic > 0) {
        const md::NanotubeGeometry g;
        frame.entrance = g.entrance_z();
        frame.exit = g.exit_z();
        frame.radius = g.radius;
        paths = il::noisy_axis_paths(tube_axis(frame), woc_synthetic, woc_sigma,
                                     woc_seed);
      } else {
        if (woc_inputs.empty()) {
          throw InvalidArgumentError("give recordings or --synthetic N");
        }
        for (const auto& in : woc_inputs) {
          const recording::Recording rec = recording::read_recording(in);
          frame = recording_frame(rec);
          const int atom = rec.header().topology.index_of(woc_atom);
          for (const auto& range : recording::episode_frame_ranges(rec)) {
            paths.push_back(atom_path(rec, atom, range, frame));
          }
        }
      }
      const auto reference = tube_axis(frame);
      const il::WocReport r = il::woc_aggregate(paths, reference);
      json report = {{"paths", paths.size()},
                     {"aggregate_error", r.aggregate_error},
                     {"median_individual_error", r.median_individual_error},
                     {"improvement_ratio", r.improvement_ratio},
                     {"individual_errors", r.individual_errors}};
      write_json(woc_out, report, out);
      if (!woc_svg.empty()) {
        write_text(woc_svg,
                   trajectory_svg(paths, frame, {r.aggregate},
                                  "individual paths and aggregate"),
                   out);
      }
    }
  } catch (const InvalidArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedTaskError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace demoforge::service
