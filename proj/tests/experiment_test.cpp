// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "clustask/config.hpp"
#include "clustask/experiment.hpp"

using namespace clustask;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("clustask_test_" + name);
  fs::remove_all(p);
  return p;
}

int errorLine(const std::string& yaml) {
  try {
    parseExperiment(yaml, "t.yaml");
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

ExperimentSpec small(std::uint32_t runs = 3) {
  ExperimentSpec spec;
  spec.scenario.node_count = 20;
  spec.runs = runs;
  spec.modes = {Mode::MultiTask, Mode::BaselineSingleTask};
  return spec;
}

}  // namespace

TEST(Config, EmptyDocumentGivesDefaults) {
  const auto spec = parseExperiment("");
  EXPECT_EQ(spec.runs, 35u);
  EXPECT_EQ(spec.scenario.node_count, 50u);
  EXPECT_EQ(spec.scenario.sm, 2u);
  EXPECT_EQ(spec.modes, std::vector<Mode>{Mode::MultiTask});
}

TEST(Config, FullDocument) {
  const auto spec = parseExperiment(R"(
experiment:
  runs: 5
  modes: [multi_task, baseline_single_task]
  output_dir: out/x
  trace: true
  threads: 2
scenario:
  node_count: 100
  demand: B
  area_m: [300, 250]
  placement: uniform_random
  capabilities_per_class: [2, 6]
  quorum: [1, 3]
  task_durations_s: [30, 90]
similarity:
  join_threshold: 0.87
channel:
  hop_delay_s: 0.004
  node_range_m: 60
  serialize_tx: false
protocol:
  confirmation_window_s: 2
  leader_check: cluster_union
message_bits:
  task_accept: 128
radio:
  e_elec_j_per_bit: 5.0e-8
sweep:
  node_count: [50, 100, 150]
  threshold: [0.6, 0.8]
)");
  EXPECT_EQ(spec.runs, 5u);
  EXPECT_EQ(spec.modes.size(), 2u);
  EXPECT_EQ(spec.output_dir, fs::path("out/x"));
  EXPECT_TRUE(spec.trace);
  EXPECT_EQ(spec.threads, 2u);
  EXPECT_EQ(spec.scenario.node_count, 100u);
  EXPECT_EQ(spec.scenario.sm, 4u);
  EXPECT_EQ(spec.scenario.area.x_m, 300.0);
  EXPECT_EQ(spec.scenario.placement, Placement::UniformRandom);
  EXPECT_EQ(spec.scenario.capabilities_per_class.lo, 2u);
  EXPECT_EQ(spec.scenario.quorum.hi, 3u);
  EXPECT_EQ(spec.scenario.task_durations_s, (std::vector<double>{30, 90}));
  EXPECT_EQ(spec.scenario.scale.join_threshold, 0.87);
  EXPECT_EQ(spec.scenario.channel.hop_delay_s, 0.004);
  EXPECT_FALSE(spec.scenario.channel.serialize_tx);
  EXPECT_EQ(spec.scenario.protocol.leader_check, LeaderCheck::ClusterUnion);
  EXPECT_EQ(spec.scenario.message_bits.task_accept, 128u);
  EXPECT_EQ(spec.sweep.at(SweepAxis::NodeCount).size(), 3u);
  EXPECT_EQ(spec.sweep.at(SweepAxis::Threshold).size(), 2u);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_EQ(errorLine("scenario:\n  node_count: 50\n  nodes: 3\n"), 3);
  EXPECT_EQ(errorLine("scenario:\n  node_count: fifty\n"), 2);
  EXPECT_EQ(errorLine("experiment:\n  runs: 0\n"), 2);
  EXPECT_EQ(errorLine("experiment:\n  modes: [multi_task, turbo]\n"), 2);
  EXPECT_EQ(errorLine("scenario:\n  demand: C\n"), 2);
  EXPECT_EQ(errorLine("channel:\n  node_range_m: -5\n"), 2);
  EXPECT_EQ(errorLine("sweep:\n  range: []\n"), 2);
  EXPECT_EQ(errorLine("sweep:\n  threshold: [0.3]\n"), 2);
  EXPECT_EQ(errorLine("a: [1, 2\n"), 2);
  EXPECT_EQ(errorLine("bogus: 1\n"), 1);
  try {
    parseExperiment("scenario:\n  sm: 0\n", "cfg.yaml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cfg.yaml:"), std::string::npos);
  }
}

TEST(Config, ShippedDefaultMatchesBuiltIns) {
  const auto spec = loadExperiment(CLUSTASK_DEFAULT_CONFIG);
  const ScenarioConfig d;
  const ScenarioConfig& c = spec.scenario;
  EXPECT_EQ(spec.runs, 35u);
  EXPECT_EQ(c.node_count, d.node_count);
  EXPECT_EQ(c.sm, d.sm);
  EXPECT_EQ(c.area.x_m, d.area.x_m);
  EXPECT_EQ(c.placement, d.placement);
  EXPECT_EQ(c.capabilities_per_class.lo, d.capabilities_per_class.lo);
  EXPECT_EQ(c.capabilities_per_class.hi, d.capabilities_per_class.hi);
  EXPECT_EQ(c.extra_structural.hi, d.extra_structural.hi);
  EXPECT_EQ(c.extra_physiological.hi, d.extra_physiological.hi);
  EXPECT_EQ(c.quorum.lo, d.quorum.lo);
  EXPECT_EQ(c.quorum.hi, d.quorum.hi);
  EXPECT_EQ(c.task_durations_s, d.task_durations_s);
  EXPECT_EQ(c.scale.join_threshold, d.scale.join_threshold);
  EXPECT_EQ(c.channel.node_range_m, d.channel.node_range_m);
  EXPECT_EQ(c.channel.hop_delay_s, d.channel.hop_delay_s);
  EXPECT_EQ(c.channel.serialize_tx, d.channel.serialize_tx);
  EXPECT_EQ(c.protocol.last_dispatch_s, d.protocol.last_dispatch_s);
  EXPECT_EQ(c.protocol.leader_check, d.protocol.leader_check);
  EXPECT_EQ(c.message_bits.task_accept, d.message_bits.task_accept);
  EXPECT_EQ(c.radio.e_elec_j_per_bit, d.radio.e_elec_j_per_bit);
  EXPECT_EQ(c.radio.eps_amp_j_per_bit_m2, d.radio.eps_amp_j_per_bit_m2);
  EXPECT_EQ(dumpScenarioJson(c), dumpScenarioJson(d));
}

TEST(Config, MissingFile) {
  EXPECT_THROW(loadExperiment("/nonexistent/clustask.yaml"), ConfigError);
}

TEST(Config, AxisApplication) {
  const ScenarioConfig base;
  EXPECT_EQ(applyAxis(base, SweepAxis::NodeCount, 150).node_count, 150u);
  EXPECT_EQ(applyAxis(base, SweepAxis::Sm, 4).sm, 4u);
  EXPECT_EQ(applyAxis(base, SweepAxis::Threshold, 0.6).scale.join_threshold, 0.6);
  EXPECT_EQ(applyAxis(base, SweepAxis::Range, 60).channel.node_range_m, 60.0);
  EXPECT_THROW(applyAxis(base, SweepAxis::Sm, 1.5), std::invalid_argument);
  EXPECT_THROW(sweepAxisFromString("speed"), std::invalid_argument);
}

TEST(Experiment, RecordsAreSortedByModeAndRun) {
  auto spec = small(4);
  spec.threads = 3;
  const auto recs = executeRuns(spec, spec.scenario, std::nullopt);
  ASSERT_EQ(recs.size(), 8u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(recs[i].mode, Mode::MultiTask);
    EXPECT_EQ(recs[i].config.run_number, i + 1);
    EXPECT_EQ(recs[i + 4].mode, Mode::BaselineSingleTask);
    EXPECT_EQ(recs[i].seed, 20u + (i + 1) + 2u);
  }
}

TEST(Experiment, ParallelMatchesSequential) {
  auto seq = small(6);
  seq.threads = 1;
  auto par = seq;
  par.threads = 4;
  std::ostringstream a, b;
  writeRunsCsv(a, executeRuns(seq, seq.scenario, std::nullopt));
  writeRunsCsv(b, executeRuns(par, par.scenario, std::nullopt));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Experiment, OutputsAreReproducible) {
  auto spec = small(3);
  spec.trace = true;
  spec.output_dir = scratch("repro_a");
  runExperiment(spec);
  auto again = spec;
  again.output_dir = scratch("repro_b");
  runExperiment(again);
  for (const char* f : {"runs.csv", "rounds.csv", "aggregate.csv", "comparison.csv", "comparison.txt"}) {
    const auto a = slurp(spec.output_dir / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(again.output_dir / f)) << f;
  }
  const auto trace = spec.output_dir / "traces" / "multi_task_n20_sm2_run1.ndjson";
  ASSERT_TRUE(fs::exists(trace));
  EXPECT_EQ(slurp(trace), slurp(again.output_dir / "traces" / "multi_task_n20_sm2_run1.ndjson"));
  std::ifstream in(trace);
  std::string line;
  std::getline(in, line);
  const auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j["t"], 0.0);
  EXPECT_EQ(j["event"], "send");
  EXPECT_EQ(j["msg"], "capability_dissemination");
}

TEST(Experiment, CsvShapes) {
  auto spec = small(3);
  spec.output_dir = scratch("shapes");
  const auto out = runExperiment(spec);
  EXPECT_EQ(out.runs.size(), 6u);
  ASSERT_EQ(out.aggregate.size(), 2u);
  ASSERT_EQ(out.comparison.size(), 1u);
  EXPECT_EQ(out.comparison[0].pairs, 3u);
  EXPECT_LE(out.comparison[0].pairs_multi_better, out.comparison[0].pairs_multi_not_worse);
  EXPECT_LE(out.comparison[0].pairs_multi_not_worse, 3u);

  std::istringstream runs(slurp(spec.output_dir / "runs.csv"));
  std::string header;
  std::getline(runs, header);
  EXPECT_EQ(header.rfind("axis,axis_value,mode,node_count,sm,run_number,seed,nc,nta,nut,nat,", 0), 0u);
  int rows = 0;
  for (std::string l; std::getline(runs, l);) ++rows;
  EXPECT_EQ(rows, 6);

  std::istringstream agg(slurp(spec.output_dir / "aggregate.csv"));
  std::getline(agg, header);
  EXPECT_NE(header.find("allocation_rate_mean,allocation_rate_ci95"), std::string::npos);
  rows = 0;
  for (std::string l; std::getline(agg, l);) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST(Experiment, SingleRunLeavesIntervalEmpty) {
  ExperimentSpec spec;
  spec.scenario.node_count = 20;
  spec.runs = 1;
  spec.output_dir = scratch("single");
  const auto out = runExperiment(spec);
  ASSERT_EQ(out.aggregate.size(), 1u);
  for (const auto& s : out.aggregate[0].stats) EXPECT_FALSE(s.half_width.has_value());
  std::istringstream agg(slurp(spec.output_dir / "aggregate.csv"));
  std::string header, row;
  std::getline(agg, header);
  std::getline(agg, row);
  EXPECT_NE(row.find(",,"), std::string::npos);
  EXPECT_FALSE(fs::exists(spec.output_dir / "comparison.csv"));
}

TEST(Experiment, MetricWithoutSamplesIsBlank) {
  // Twenty nodes at the default range form clusters too small for any quorum.
  ExperimentSpec spec;
  spec.scenario.node_count = 20;
  spec.runs = 2;
  spec.output_dir = scratch("blank");
  const auto out = runExperiment(spec);
  const auto& names = aggregateMetricNames();
  const auto lat = std::find(names.begin(), names.end(), "mean_lat_s") - names.begin();
  ASSERT_EQ(out.aggregate.size(), 1u);
  EXPECT_EQ(out.aggregate[0].stats[0].samples, 2u);
  EXPECT_EQ(out.aggregate[0].stats[lat].samples, 0u);
  std::istringstream agg(slurp(spec.output_dir / "aggregate.csv"));
  std::string header, row;
  std::getline(agg, header);
  std::getline(agg, row);
  std::vector<std::string> cells;
  std::istringstream cs(row);
  for (std::string c; std::getline(cs, c, ',');) cells.push_back(c);
  EXPECT_EQ(cells.at(6 + 2 * lat), "");
}

TEST(Experiment, SweepHasOneAggregateRowPerValue) {
  ExperimentSpec spec;
  spec.runs = 2;
  spec.scenario.node_count = 20;
  spec.sweep[SweepAxis::NodeCount] = {16, 20, 25};
  spec.output_dir = scratch("sweep");
  const auto out = runExperiment(spec, SweepAxis::NodeCount);
  ASSERT_EQ(out.aggregate.size(), 3u);
  EXPECT_EQ(out.aggregate[0].node_count, 16u);
  EXPECT_EQ(out.aggregate[2].node_count, 25u);
  EXPECT_EQ(out.aggregate[1].point->value, 20.0);
  EXPECT_THROW(runExperiment(spec, SweepAxis::Range), std::invalid_argument);
}

TEST(Experiment, UnwritableOutputFails) {
  ExperimentSpec spec;
  spec.runs = 1;
  spec.scenario.node_count = 4;
  const fs::path blocker = scratch("blocker");
  std::ofstream(blocker) << "x";
  spec.output_dir = blocker / "sub";
  EXPECT_THROW(runExperiment(spec), std::runtime_error);
}

TEST(Experiment, DumpScenario) {
  ScenarioConfig c;
  c.node_count = 4;
  const auto j = nlohmann::json::parse(dumpScenarioJson(c));
  EXPECT_EQ(j["seed"], 4 + 1 + 2);
  ASSERT_EQ(j["nodes"].size(), 4u);
  EXPECT_EQ(j["nodes"][1]["x"], 150.0);
  EXPECT_EQ(j["tasks"].size(), 28u);
  EXPECT_EQ(j["ap"]["x"], 100.0);
  EXPECT_EQ(dumpScenarioJson(c), dumpScenarioJson(c));
}
