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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <array>
#include <filesystem>
#include <memory>

#include "demoforge/common/error.h"
#include "demoforge/env/expert.h"
#include "demoforge/env/policy.h"
#include "demoforge/env/rollout.h"
#include "demoforge/il/actor.h"
#include "demoforge/il/bc.h"
#include "demoforge/il/dataset.h"
#include "demoforge/il/mdp.h"
#include "demoforge/il/stats.h"
#include "demoforge/il/woc.h"
#include "demoforge/md/builders.h"
#include "demoforge/md/forcefield.h"
#include "demoforge/md/integrator.h"
#include "demoforge/nn/checkpoint.h"
#include "demoforge/recording/container.h"
#include "demoforge/recording/csv.h"

namespace py = pybind11;
using namespace demoforge;

namespace {

using Triple = std::array<double, 3>;

std::vector<Triple> triples(std::span<const Vec3> v) {
  std::vector<Triple> out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back({p.x, p.y, p.z});
  return out;
}

std::vector<Vec3> vecs(const std::vector<Triple>& v) {
  std::vector<Vec3> out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back({p[0], p[1], p[2]});
  return out;
}

env::TaskConfig nanotube_task(double jitter) {
  env::TaskConfig cfg;
  cfg.jitter = jitter;
  return cfg;
}

std::unique_ptr<env::Policy> policy_from_spec(const std::string& spec,
                                              const env::TaskConfig& task,
                                              nn::GaussianPolicy& storage) {
  if (spec == "expert") {
    return std::make_unique<env::ExpertPolicy>(
        env::default_expert_config(task.build.tube));
  }
  if (spec == "random") return std::make_unique<env::RandomPolicy>(task.max_force);
  storage = nn::load_policy(spec);
  return std::make_unique<il::GaussianActor>(storage, il::GaussianActor::Mode::kMean);
}

class PySimulation {
 public:
  PySimulation(const std::string& task, uint64_t seed, double dt, double gamma,
               double temperature) {
    auto [topology, state] = md::build_system(task, seed);
    const auto thermostat = gamma > 0.0
                                ? md::Thermostat::langevin(gamma, temperature, seed)
                                : md::Thermostat::none();
    sim_.emplace(std::move(topology), std::move(state), dt, thermostat);
  }

  void step(int n) { sim_->step(n); }
  std::vector<Triple> positions() const { return triples(sim_->state().positions); }
  std::vector<Triple> velocities() const { return triples(sim_->state().velocities); }
  double time() const { return sim_->state().time; }
  int64_t steps() const { return sim_->state().step; }
  std::vector<std::string> atom_names() const { return sim_->topology().atom_names; }
  py::dict energies() {
    const auto e = sim_->energies();
    py::dict d;
    d["kinetic"] = e.kinetic;
    d["potential"] = e.potential;
    d["total"] = e.total();
    return d;
  }
  void pull(const std::string& id, const std::vector<int>& atoms,
            const Triple& target, double scale, const std::string& mode) {
    auto list = sim_->interactions();
    std::erase_if(list, [&](const auto& f) { return f.id == id; });
    md::InteractiveForce f;
    f.id = id;
    f.atom_indices = atoms;
    f.controller_position = {target[0], target[1], target[2]};
    f.scale = scale;
    f.mode = md::parse_interaction_mode(mode);
    f.validate(sim_->topology().atom_count());
    list.push_back(std::move(f));
    sim_->set_interactions(std::move(list));
  }
  void release(const std::string& id) {
    auto list = sim_->interactions();
    std::erase_if(list, [&](const auto& f) { return f.id == id; });
    sim_->set_interactions(std::move(list));
  }

 private:
  std::optional<md::Simulation> sim_;
};

}  // namespace

PYBIND11_MODULE(_demoforge, m) {
  m.doc() = "Interactive MD and imitation learning core";

  static PyObject* base =
      py::exception<Error>(m, "Error", PyExc_RuntimeError).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidArgumentError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const UnsupportedTaskError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const LookupError& e) {
      PyErr_SetString(PyExc_KeyError, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  m.def(
      "build_system",
      [](const std::string& task, uint64_t seed) {
        const auto [t, s] = md::build_system(task, seed);
        py::dict d;
        d["atom_names"] = t.atom_names;
        d["masses"] = t.masses;
        d["positions"] = triples(s.positions);
        d["bonds"] = t.bonds.size();
        return d;
      },
      py::arg("task"), py::arg("seed") = 0);

  m.def(
      "compute_forces",
      [](const std::string& task, const std::vector<Triple>& positions) {
        const auto [t, s] = md::build_system(task, 0);
        const auto r = md::compute_forces(t, vecs(positions));
        return py::make_tuple(r.potential, triples(r.forces));
      },
      py::arg("task"), py::arg("positions"),
      "Potential energy and forces for the task topology at `positions`.");

  py::class_<PySimulation>(m, "Simulation")
      .def(py::init<const std::string&, uint64_t, double, double, double>(),
           py::arg("task") = "nanotube", py::arg("seed") = 0,
           py::arg("dt") = md::kDefaultTimestep, py::arg("gamma") = 0.0,
           py::arg("temperature") = 300.0)
      .def("step", &PySimulation::step, py::arg("n") = 1)
      .def("energies", &PySimulation::energies)
      .def("pull", &PySimulation::pull, py::arg("id"), py::arg("atoms"),
           py::arg("target"), py::arg("scale") = 1.0,
           py::arg("mode") = "gaussian-well")
      .def("release", &PySimulation::release, py::arg("id"))
      .def_property_readonly("positions", &PySimulation::positions)
      .def_property_readonly("velocities", &PySimulation::velocities)
      .def_property_readonly("time", &PySimulation::time)
      .def_property_readonly("steps", &PySimulation::steps)
      .def_property_readonly("atom_names", &PySimulation::atom_names);

  m.def(
      "record_expert_demos",
      [](const std::filesystem::path& out, int episodes, uint64_t first_seed,
         double jitter) {
        const auto task = nanotube_task(jitter);
        env::ExpertPolicy expert(env::default_expert_config(task.build.tube));
        recording::Recording rec(env::rollout_header(task, first_seed));
        int successes = 0;
        for (int k = 0; k < episodes; ++k) {
          successes += env::rollout(expert, task, first_seed + k, task.max_steps, &rec)
                           .success;
        }
        recording::write_recording(rec, out);
        py::dict d;
        d["episodes"] = episodes;
        d["successes"] = successes;
        d["frames"] = rec.frame_count();
        return d;
      },
      py::arg("out"), py::arg("episodes") = 10, py::arg("first_seed") = 0,
      py::arg("jitter") = 0.1);

  m.def(
      "recording_info",
      [](const std::filesystem::path& path) {
        const auto rec = recording::read_recording(path);
        py::dict d;
        d["task_id"] = rec.header().task_id;
        d["atoms"] = rec.header().topology.atom_count();
        d["frames"] = rec.frame_count();
        d["events"] = rec.event_count();
        d["dt"] = rec.header().dt;
        return d;
      },
      py::arg("path"));

  m.def(
      "export_csv",
      [](const std::filesystem::path& path, const std::string& style) {
        return recording::export_csv(recording::read_recording(path),
                                     recording::parse_csv_style(style));
      },
      py::arg("path"), py::arg("style") = "table1");

  m.def(
      "atom_trajectory",
      [](const std::filesystem::path& path, const std::string& atom) {
        const auto rec = recording::read_recording(path);
        std::vector<std::pair<int64_t, Triple>> out;
        for (const auto& [step, p] : recording::extract_atom_trajectory(rec, atom)) {
          out.push_back({step, {p.x, p.y, p.z}});
        }
        return out;
      },
      py::arg("path"), py::arg("atom") = "C61");

  m.def(
      "train_bc",
      [](const std::filesystem::path& demos, const std::filesystem::path& out,
         uint64_t seed, int epochs, const std::string& loss) {
        const auto data = il::load_dataset(demos);
        env::TaskConfig task;
        il::BcConfig cfg;
        cfg.epochs = epochs;
        cfg.loss = nn::parse_loss_kind(loss);
        const auto r = il::bc_train(data, il::make_policy(task, {64, 64}, seed), cfg, seed);
        nn::save_policy(out, r.policy, seed, {{"algorithm", "bc"}});
        py::dict d;
        d["rows"] = data.size();
        d["train_losses"] = r.train_losses;
        d["validation_losses"] = r.validation_losses;
        return d;
      },
      py::arg("demos"), py::arg("out"), py::arg("seed") = 0, py::arg("epochs") = 200,
      py::arg("loss") = "mse");

  m.def(
      "evaluate",
      [](const std::string& policy, const std::vector<uint64_t>& seeds, double jitter) {
        const auto task = nanotube_task(jitter);
        nn::GaussianPolicy storage;
        auto p = policy_from_spec(policy, task, storage);
        std::vector<bool> success;
        for (uint64_t s : seeds) {
          success.push_back(env::rollout(*p, task, s, task.max_steps).success);
        }
        return success;
      },
      py::arg("policy"), py::arg("seeds"), py::arg("jitter") = 0.1,
      "Per-seed success of 'expert', 'random' or a checkpoint path.");

  m.def(
      "irl_benchmark",
      [](int iterations, double lr) {
        const auto bench = il::corner_goal_benchmark();
        const auto r = il::maxent_irl(bench.mdp, bench.demonstrations, iterations, lr);
        py::dict d;
        d["theta"] = r.theta;
        d["match_rate"] = il::greedy_match_rate(bench.mdp, r.theta);
        d["max_feature_gap"] = r.max_feature_gap;
        return d;
      },
      py::arg("iterations") = 500, py::arg("lr") = 3.0);

  m.def(
      "woc_synthetic",
      [](int count, double sigma, uint64_t seed) {
        const std::vector<Vec3> axis{{0, 0, -1}, {0, 0, 1}};
        const auto r = il::woc_aggregate(il::noisy_axis_paths(axis, count, sigma, seed), axis);
        py::dict d;
        d["aggregate_error"] = r.aggregate_error;
        d["median_individual_error"] = r.median_individual_error;
        d["improvement_ratio"] = r.improvement_ratio;
        d["aggregate"] = triples(r.aggregate);
        return d;
      },
      py::arg("count") = 50, py::arg("sigma") = 0.1, py::arg("seed") = 1);

  m.def(
      "sign_test",
      [](const std::vector<bool>& candidate, const std::vector<bool>& baseline) {
        std::unique_ptr<bool[]> c(new bool[candidate.size()]);
        std::unique_ptr<bool[]> b(new bool[baseline.size()]);
        std::copy(candidate.begin(), candidate.end(), c.get());
        std::copy(baseline.begin(), baseline.end(), b.get());
        const auto t = il::sign_test(std::span<const bool>(c.get(), candidate.size()),
                                     std::span<const bool>(b.get(), baseline.size()));
        py::dict d;
        d["wins"] = t.wins;
        d["losses"] = t.losses;
        d["ties"] = t.ties;
        d["p_value"] = t.p_value;
        return d;
      },
      py::arg("candidate"), py::arg("baseline"));
}
