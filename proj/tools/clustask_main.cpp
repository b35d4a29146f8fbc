// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

// clustask: run seeded experiments, parameter sweeps, or dump a scenario.
//
// Exit codes: 0 success, 1 config error, 2 runtime error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "clustask/config.hpp"
#include "clustask/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

void printSummary(const clustask::ExperimentOutput& out, const clustask::ExperimentSpec& spec) {
  const auto& names = clustask::aggregateMetricNames();
  for (const auto& row : out.aggregate) {
    if (row.point) std::cout << toString(row.point->axis) << '=' << row.point->value << ' ';
    std::cout << toString(row.mode) << " n=" << row.node_count << " sm=" << row.sm
              << " runs=" << row.runs;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] != "nc" && names[i] != "allocation_rate" && names[i] != "completed" &&
          names[i] != "mean_lat_s" && names[i] != "ec_j") {
        continue;
      }
      if (row.stats[i].samples == 0) {
        std::cout << ' ' << names[i] << "=n/a";
        continue;
      }
      std::cout << ' ' << names[i] << '=' << row.stats[i].mean;
      if (row.stats[i].half_width) std::cout << "±" << *row.stats[i].half_width;
    }
    std::cout << '\n';
  }
  if (!out.comparison.empty()) clustask::writeComparisonReport(std::cout, out.comparison);
  std::cout << "wrote " << spec.output_dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capability-similarity clustering and multi-task allocation simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<std::uint32_t> runs;
  std::optional<std::uint32_t> threads;
  bool trace = false;

  auto* run = app.add_subcommand("run", "Execute all runs and modes of a config");
  run->add_option("config", config_path, "YAML config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output-dir", output_dir, "Override experiment.output_dir");
  run->add_option("-n,--runs", runs, "Override experiment.runs")->check(CLI::PositiveNumber);
  run->add_option("-j,--threads", threads, "Worker threads (0 = all cores)");
  run->add_flag("--trace", trace, "Write one NDJSON event log per run");

  std::string axis_name;
  auto* sweep = app.add_subcommand("sweep", "Run every value of one sweep axis");
  sweep->add_option("config", config_path, "YAML config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--axis", axis_name, "node_count, sm, threshold or range")->required();
  sweep->add_option("-o,--output-dir", output_dir, "Override experiment.output_dir");
  sweep->add_option("-n,--runs", runs, "Override experiment.runs")->check(CLI::PositiveNumber);
  sweep->add_option("-j,--threads", threads, "Worker threads (0 = all cores)");
  sweep->add_flag("--trace", trace, "Write one NDJSON event log per run");

  std::uint32_t run_number = 1;
  std::optional<std::string> dump_out;
  auto* dump = app.add_subcommand("dump-scenario", "Write the expanded scenario as JSON");
  dump->add_option("config", config_path, "YAML config file")->required()->check(CLI::ExistingFile);
  dump->add_option("-r,--run", run_number, "Run number used for the task seed");
  dump->add_option("-o,--out", dump_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  clustask::ExperimentSpec spec;
  std::optional<clustask::SweepAxis> axis;
  try {
    spec = clustask::loadExperiment(config_path);
    if (output_dir) spec.output_dir = *output_dir;
    if (runs) spec.runs = *runs;
    if (threads) spec.threads = *threads;
    if (trace) spec.trace = true;
    if (*sweep) {
      axis = clustask::sweepAxisFromString(axis_name);
      if (!spec.sweep.contains(*axis)) {
        throw clustask::ConfigError(config_path, 0,
                                    "no values listed under sweep." + axis_name);
      }
    }
    spec.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (*dump) {
      clustask::ScenarioConfig c = spec.scenario;
      c.run_number = run_number;
      const std::string json = clustask::dumpScenarioJson(c);
      if (dump_out) {
        std::ofstream out(*dump_out, std::ios::binary);
        if (!(out << json)) throw std::runtime_error("cannot write " + *dump_out);
      } else {
        std::cout << json;
      }
      return kOk;
    }
    const auto out = clustask::runExperiment(spec, axis);
    printSummary(out, spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
