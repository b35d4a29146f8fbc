// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "clustask/config.hpp"
#include "clustask/event_log.hpp"
#include "clustask/experiment.hpp"
#include "clustask/simulation.hpp"

namespace py = pybind11;
using namespace clustask;

namespace {

CapabilitySet capsFrom(const std::vector<std::string>& names) {
  CapabilitySet s;
  for (const auto& n : names) {
    const auto c = capabilityFromString(n);
    if (!c) throw py::value_error("unknown capability '" + n + "'");
    s.insert(*c);
  }
  return s;
}

py::dict summaryDict(const RunSummary& s) {
  py::dict d;
  d["nc"] = s.nc;
  d["nta"] = s.nta;
  d["nut"] = s.nut;
  d["nat"] = s.nat;
  d["allocation_rate"] = s.allocation_rate;
  d["completed"] = s.completed;
  d["mean_cpt"] = s.mean_cpt;
  d["mean_cit"] = s.mean_cit;
  d["mean_lat_s"] = s.mean_lat_s;
  d["ec_j"] = s.ec_j;
  d["ec_nodes_j"] = s.ec_nodes_j;
  d["ec_ap_j"] = s.ec_ap_j;
  return d;
}

py::list roundList(const std::vector<RoundMetrics>& rounds) {
  py::list out;
  for (const auto& r : rounds) {
    py::dict d;
    d["round_time_s"] = r.round_time_s;
    d["tasks_dispatched"] = r.tasks_dispatched;
    d["nc"] = r.nc;
    d["cpt"] = r.cpt;
    d["cit"] = r.cit;
    d["lat_s"] = r.lat_s;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Capability-similarity clustering and multi-task allocation simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("node_count", &ScenarioConfig::node_count)
      .def_readwrite("sm", &ScenarioConfig::sm)
      .def_readwrite("run_number", &ScenarioConfig::run_number)
      .def_property(
          "node_range_m", [](const ScenarioConfig& c) { return c.channel.node_range_m; },
          [](ScenarioConfig& c, double v) { c.channel.node_range_m = v; })
      .def_property(
          "hop_delay_s", [](const ScenarioConfig& c) { return c.channel.hop_delay_s; },
          [](ScenarioConfig& c, double v) { c.channel.hop_delay_s = v; })
      .def_property(
          "join_threshold", [](const ScenarioConfig& c) { return c.scale.join_threshold; },
          [](ScenarioConfig& c, double v) { c.scale.join_threshold = v; })
      .def_property(
          "uniform_placement",
          [](const ScenarioConfig& c) { return c.placement == Placement::UniformRandom; },
          [](ScenarioConfig& c, bool v) { c.placement = v ? Placement::UniformRandom : Placement::Grid; })
      .def("validate", &ScenarioConfig::validate)
      .def("__repr__", [](const ScenarioConfig& c) {
        return "ScenarioConfig(node_count=" + std::to_string(c.node_count) + ", sm=" + std::to_string(c.sm) +
               ", run_number=" + std::to_string(c.run_number) + ")";
      });

  m.def(
      "similarity",
      [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        return similarity(capsFrom(a), capsFrom(b));
      },
      py::arg("a"), py::arg("b"), "Cosine similarity of two capability-name lists.");

  m.def("seed_for", &seedFor, py::arg("node_count"), py::arg("run_number"), py::arg("sm"));

  m.def(
      "place_nodes",
      [](std::uint32_t n, double x_m, double y_m) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : placeNodes(n, {x_m, y_m})) out.emplace_back(p.x, p.y);
        return out;
      },
      py::arg("n"), py::arg("x_m") = 200.0, py::arg("y_m") = 200.0);

  m.def(
      "dump_scenario", [](const ScenarioConfig& c) { return dumpScenarioJson(c); }, py::arg("config"),
      "Expanded scenario as a JSON string.");

  m.def(
      "simulate",
      [](const ScenarioConfig& c, const std::string& mode, bool trace) {
        RunResult r;
        {
          py::gil_scoped_release release;
          r = runMode(c, modeFromString(mode), trace);
        }
        py::dict out;
        out["summary"] = summaryDict(r.summary);
        out["rounds"] = roundList(r.ledger.perRound());
        std::vector<std::uint32_t> leaders;
        for (NodeId id : r.ap.leader_list) leaders.push_back(id.value);
        out["leaders"] = leaders;
        if (trace) {
          py::list lines;
          for (const auto& rec : r.log) lines.append(toJsonLine(rec));
          out["trace"] = lines;
        }
        return out;
      },
      py::arg("config"), py::arg("mode") = "multi_task", py::arg("trace") = false,
      "Run one scenario to the end; returns summary, per-round metrics and leaders.");

  m.def(
      "aggregate",
      [](const std::vector<double>& values, double confidence) {
        const auto s = aggregate(values, confidence);
        return py::make_tuple(s.mean, s.half_width);
      },
      py::arg("values"), py::arg("confidence") = 0.95,
      "Mean and Student-t half-width (None for fewer than two values).");

  m.def(
      "run_experiment",
      [](const std::filesystem::path& config, std::optional<std::filesystem::path> output_dir,
         std::optional<std::string> axis, std::optional<std::uint32_t> runs) {
        ExperimentSpec spec = loadExperiment(config);
        if (output_dir) spec.output_dir = *output_dir;
        if (runs) spec.runs = *runs;
        std::optional<SweepAxis> a;
        if (axis) a = sweepAxisFromString(*axis);
        ExperimentOutput out;
        {
          py::gil_scoped_release release;
          out = runExperiment(spec, a);
        }
        py::list rows;
        const auto& names = aggregateMetricNames();
        for (const auto& row : out.aggregate) {
          py::dict d;
          d["mode"] = std::string(toString(row.mode));
          d["node_count"] = row.node_count;
          d["sm"] = row.sm;
          d["runs"] = row.runs;
          if (row.point) d["axis_value"] = row.point->value;
          for (std::size_t i = 0; i < names.size(); ++i) {
            d[py::str(names[i] + "_mean")] =
                row.stats[i].samples ? py::cast(row.stats[i].mean) : py::none();
            d[py::str(names[i] + "_ci95")] = row.stats[i].half_width;
          }
          rows.append(d);
        }
        return rows;
      },
      py::arg("config"), py::arg("output_dir") = py::none(), py::arg("axis") = py::none(),
      py::arg("runs") = py::none(), "Run a YAML experiment and return its aggregate rows.");
}
