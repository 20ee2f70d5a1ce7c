// Copyright 2026 The Vigil Authors. All rights reserved.
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

#include <sstream>

#include "vigil/cli.h"
#include "vigil/decompose.h"
#include "vigil/io.h"
#include "vigil/runtime.h"
#include "vigil/solver.h"

namespace py = pybind11;

namespace vigil {
namespace {

// Documents cross the boundary as JSON text; the Python side decodes them.
class PyWorld {
 public:
  explicit PyWorld(SurveillanceWorld w) : world_(std::move(w)) {}

  int sensor_count() const { return world_.sensor_count(); }
  LocationSet free_cells() const { return world_.free_cells(); }
  Partition partition() const { return world_.partition(); }
  std::string to_json() const { return world_to_json(world_.desc()).dump(); }
  std::string subgame_json(int i) const { return subgame_to_json(world_, i).dump(); }
  bool visible(int sensor, Location from, Location cell) const {
    return world_.visible(sensor, from, cell);
  }

  std::string solve(int i, const std::string& mode, std::size_t cap) const {
    Solution s = solve_subgame(world_, i, trigger_mode_from_string(mode), cap);
    Json j = {{"strategy", strategy_to_json(world_, s.table)},
              {"realizable", s.stats.realizable},
              {"belief_states", s.stats.belief_states},
              {"arena_nodes", s.stats.arena_nodes},
              {"arena_edges", s.stats.arena_edges},
              {"region_size", s.stats.region_size}};
    return j.dump();
  }

  std::vector<StrategyTable> tables(const std::vector<std::string>& docs) const {
    std::vector<StrategyTable> out;
    for (const auto& d : docs) {
      out.push_back(strategy_from_json(world_, parse_document(d)));
    }
    return out;
  }

  std::string simulate_run(const std::vector<std::string>& strategies,
                           const std::string& adversary, std::uint64_t seed,
                           int steps, const std::string& mode,
                           const std::vector<Location>& script) const {
    Composer c(world_, tables(strategies), composition_mode_from_string(mode));
    Trace t = simulate(c, {adversary_kind_from_string(adversary), seed}, steps,
                       script);
    return trace_to_ndjson(world_, t);
  }

  std::string verify(const std::vector<std::string>& strategies,
                     const std::string& mode, std::size_t cap) const {
    Composer c(world_, tables(strategies), composition_mode_from_string(mode));
    return verdict_to_json(world_, verify_closed_loop(c, cap)).dump();
  }

 private:
  SurveillanceWorld world_;
};

py::tuple cli(const std::vector<std::string>& args, const std::string& input) {
  std::vector<std::string> all{"vigil"};
  all.insert(all.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : all) argv.push_back(a.c_str());
  std::ostringstream out, err;
  std::istringstream in(input);
  int code;
  {
    py::gil_scoped_release release;
    code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err, in);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace
}  // namespace vigil

PYBIND11_MODULE(_vigil, m) {
  using namespace vigil;
  m.doc() = "Native core of vigil";
  m.attr("OUTSIDE") = kOutside;
  m.attr("DEFAULT_CAP") = kDefaultBeliefCap;

  py::register_exception<Error>(m, "VigilError", PyExc_RuntimeError);

  py::class_<PyWorld>(m, "World")
      .def_static("parse", [](const std::string& text) {
        return PyWorld(parse_world(text));
      })
      .def_property_readonly("sensor_count", &PyWorld::sensor_count)
      .def_property_readonly("free_cells", &PyWorld::free_cells)
      .def_property_readonly("partition", &PyWorld::partition)
      .def("to_json", &PyWorld::to_json)
      .def("subgame_json", &PyWorld::subgame_json, py::arg("i"))
      .def("visible", &PyWorld::visible, py::arg("sensor"), py::arg("sensor_at"),
           py::arg("cell"))
      .def("solve", &PyWorld::solve, py::arg("i"),
           py::arg("trigger_mode") = "literal", py::arg("cap") = kDefaultBeliefCap,
           py::call_guard<py::gil_scoped_release>())
      .def("simulate", &PyWorld::simulate_run, py::arg("strategies"),
           py::arg("adversary") = "random", py::arg("seed") = 0,
           py::arg("steps") = 100, py::arg("mode") = "autonomous",
           py::arg("script") = std::vector<Location>{})
      .def("verify", &PyWorld::verify, py::arg("strategies"),
           py::arg("mode") = "autonomous", py::arg("cap") = kDefaultBeliefCap,
           py::call_guard<py::gil_scoped_release>());

  m.def("local_safety_bound", &local_safety_bound, py::arg("b"), py::arg("n"));
  m.def("project_belief", &project_belief, py::arg("partition"), py::arg("i"),
        py::arg("belief"));
  m.def("recombine_beliefs", &recombine_beliefs, py::arg("partition"),
        py::arg("locals"));
  m.def("cli", &cli, py::arg("args"), py::arg("input") = "");
}
