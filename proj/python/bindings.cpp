// Copyright 2026 The dualrope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Thin Python surface over the C++ core. Results come back as plain dicts
// and lists so callers need nothing beyond the standard library.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dualrope/cli.hpp"
#include "dualrope/config.hpp"
#include "dualrope/errors.hpp"
#include "dualrope/estimation.hpp"
#include "dualrope/geometry.hpp"
#include "dualrope/planner.hpp"
#include "dualrope/rope_model.hpp"
#include "dualrope/sim.hpp"

namespace py = pybind11;
using namespace dualrope;

namespace {

py::dict grasp_dict(const GraspOutcome& g) {
  py::dict d;
  d["passed"] = g.passed;
  d["success"] = g.success;
  d["margin"] = g.margin;
  d["time"] = g.time;
  d["lateral_offset"] = g.lateral_offset;
  d["hook_height"] = g.hook_height;
  d["d_hook"] = g.d_hook;
  return d;
}

py::dict plan_dict(const PlannedTrajectory& plan) {
  py::list t, d, a, psi, w_gr;
  py::list hook, r1, r2;
  for (const auto& s : plan.steps) {
    t.append(s.t);
    d.append(s.d);
    a.append(s.a);
    psi.append(s.psi);
    w_gr.append(s.w_gr);
    hook.append(py::make_tuple(s.hook.x(), s.hook.y(), s.hook.z()));
    r1.append(py::make_tuple(s.robot1.x(), s.robot1.y(), s.robot1.z()));
    r2.append(py::make_tuple(s.robot2.x(), s.robot2.y(), s.robot2.z()));
  }
  py::dict out;
  out["t"] = t;
  out["d"] = d;
  out["a"] = a;
  out["psi"] = psi;
  out["w_gr"] = w_gr;
  out["hook"] = hook;
  out["robot1"] = r1;
  out["robot2"] = r2;
  out["d_max"] = plan.stats.bounds.d_max;
  out["d_max_height"] = plan.stats.bounds.by_height;
  out["d_max_roll"] = plan.stats.bounds.by_roll;
  return out;
}

}  // namespace

PYBIND11_MODULE(_dualrope, m) {
  m.doc() = "Dual-robot rope shape planning, estimation and simulation.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  auto numeric = py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  // Registered after its base so the more specific translator wins.
  py::register_exception<InfeasibleError>(m, "InfeasibleError", numeric.ptr());
  py::register_exception<NoPassError>(m, "NoPassError", PyExc_RuntimeError);

  m.def("version", &version);

  py::class_<RopeSpec>(m, "RopeSpec")
      .def(py::init<>())
      .def_readwrite("length", &RopeSpec::length)
      .def_readwrite("mass", &RopeSpec::mass)
      .def_readwrite("hook_length", &RopeSpec::hook_length)
      .def_readwrite("attach_offset", &RopeSpec::attach_offset)
      .def_readwrite("gravity", &RopeSpec::gravity);

  m.def("arc_length", &arc_length, py::arg("a"), py::arg("span"));
  m.def("arc_length_general", &arc_length_general, py::arg("a"), py::arg("b"), py::arg("y_span"));
  m.def("solve_curvature_for_length", &solve_curvature_for_length, py::arg("span"),
        py::arg("length"));
  m.def("solve_span_for_length", &solve_span_for_length, py::arg("a"), py::arg("length"));
  m.def("sag", &sag, py::arg("a"), py::arg("span"));
  m.def(
      "endpoint_tension",
      [](double a, double span, const RopeSpec& rope) {
        const Tension t = endpoint_tension(a, span, rope);
        return py::make_tuple(t.magnitude, t.horizontal, t.vertical);
      },
      py::arg("a"), py::arg("span"), py::arg("rope") = RopeSpec{},
      "(magnitude, horizontal, vertical) endpoint tension in N.");

  m.def(
      "rope_ground_truth",
      [](const Vec3& a1, const Vec3& a2, double length) {
        const TrueShape t = rope_ground_truth(a1, a2, length);
        py::dict d;
        d["a"] = t.shape.a;
        d["b"] = t.shape.b;
        d["psi"] = t.shape.psi;
        d["y_end"] = t.y_end;
        d["z_end"] = t.z_end;
        d["degenerate"] = t.degenerate;
        return d;
      },
      py::arg("attach1"), py::arg("attach2"), py::arg("length"));

  m.def(
      "estimate_shape",
      [](const std::vector<Vec3>& points, const Vec3& a1, const Vec3& a2, const RopeSpec& rope,
         std::uint64_t seed) {
        EstimationConfig cfg;
        cfg.seed = seed;
        ShapeFilter filter;
        const EstimatedShape e = estimate_shape({points, a1, a2}, cfg, rope, filter);
        py::dict d;
        d["a"] = e.shape.a;
        d["b"] = e.shape.b;
        d["c"] = e.shape.c;
        d["psi"] = e.shape.psi;
        d["phi"] = e.shape.phi;
        d["y_end"] = e.y_end;
        d["stale"] = e.stale;
        d["inliers"] = e.inliers;
        return d;
      },
      py::arg("points"), py::arg("attach1"), py::arg("attach2"), py::arg("rope") = RopeSpec{},
      py::arg("seed") = 0, "Single-frame estimate with a fresh filter.");

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readwrite("name", &ScenarioConfig::name)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("servo_enabled", &ScenarioConfig::servo_enabled)
      .def_readwrite("rope", &ScenarioConfig::rope)
      .def_property(
          "w", [](const ScenarioConfig& c) { return c.planner.w; },
          [](ScenarioConfig& c, double w) { c.planner.w = w; });

  m.def("load_config", &load_config, py::arg("path"));
  m.def("parse_config", &parse_config, py::arg("yaml_text"));

  m.def(
      "plan",
      [](const ScenarioConfig& cfg) {
        return plan_dict(plan_trajectory(build_trajectory(cfg), cfg.planner, cfg.rope));
      },
      py::arg("config"));

  m.def(
      "simulate",
      [](const ScenarioConfig& cfg) {
        ScenarioRunLog log;
        {
          py::gil_scoped_release release;
          log = run_scenario(cfg);
        }
        py::dict d;
        d["grasp"] = grasp_dict(log.summary.grasp);
        d["grasp_error"] = log.summary.grasp_error;
        d["hook_rmse_cruise"] = log.summary.hook_rmse_cruise;
        d["hook_rmse"] = log.summary.hook_rmse;
        d["shape_error_cruise"] = log.summary.shape_error_cruise;
        d["max_correction_sum"] = log.summary.max_correction_sum;
        d["frames"] = log.summary.frames;
        d["stale_frames"] = log.summary.stale_frames;
        d["steps"] = log.rows.size();
        return d;
      },
      py::arg("config"), "Run one closed-loop scenario and return its summary.");

  m.def(
      "ablate",
      [](const ScenarioConfig& cfg, const std::vector<double>& weights, int runs,
         std::uint64_t seed, int threads) {
        AblationResult r;
        {
          py::gil_scoped_release release;
          r = run_ablation(cfg, weights, runs, seed, threads);
        }
        py::list rows;
        for (const auto& row : r.table) {
          py::dict d;
          d["weight"] = row.weight;
          d["successes"] = row.successes;
          d["failures"] = row.failures;
          d["rate"] = row.rate;
          rows.append(d);
        }
        return rows;
      },
      py::arg("config"), py::arg("weights"), py::arg("runs"), py::arg("seed") = 0,
      py::arg("threads") = 0);

  m.def("run_cli", &run_cli, py::arg("args"), "Invoke the command line; returns the exit code.");
}
