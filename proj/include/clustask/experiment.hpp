// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "clustask/config.hpp"
#include "clustask/metrics.hpp"
#include "clustask/simulation.hpp"

namespace clustask {

/// Which sweep point a run belongs to; empty for a plain experiment.
struct AxisPoint {
  SweepAxis axis;
  double value;
};

struct RunRecord {
  std::optional<AxisPoint> point;
  Mode mode = Mode::MultiTask;
  ScenarioConfig config;
  std::uint64_t seed = 0;
  double total_task_duration_s = 0.0;
  RunSummary summary;
  std::vector<RoundMetrics> rounds;
};

struct AggregateRow {
  std::optional<AxisPoint> point;
  Mode mode = Mode::MultiTask;
  std::uint32_t node_count = 0;
  std::uint32_t sm = 0;
  std::uint32_t runs = 0;
  /// In aggregateMetricNames() order.
  std::vector<MetricStat> stats;
};

/// Multi-task vs baseline on the same seeds.
struct ComparisonRow {
  std::optional<AxisPoint> point;
  std::uint32_t node_count = 0;
  std::uint32_t sm = 0;
  std::uint32_t pairs = 0;
  double multi_completed_mean = 0.0;
  double baseline_completed_mean = 0.0;
  double multi_nat_mean = 0.0;
  double baseline_nat_mean = 0.0;
  /// Seed pairs where multi-task completed at least as many tasks.
  std::uint32_t pairs_multi_not_worse = 0;
  std::uint32_t pairs_multi_better = 0;
};

/// Columns aggregated per run: nc, nta, nut, nat, allocation_rate, ...
const std::vector<std::string>& aggregateMetricNames();

/// Runs one scenario in one mode.
RunResult runMode(const ScenarioConfig& config, Mode mode, bool record_log = false);

/// Every (mode, run_number) pair of `spec` at `config`, on `threads` workers
/// (0 = hardware concurrency). Output is sorted by mode then run_number and
/// does not depend on the thread count. With `trace_dir`, one NDJSON event log
/// per run is written there.
std::vector<RunRecord> executeRuns(const ExperimentSpec& spec, const ScenarioConfig& config,
                                   std::optional<AxisPoint> point,
                                   const std::optional<std::filesystem::path>& trace_dir = {});

std::vector<AggregateRow> aggregateRuns(const std::vector<RunRecord>& records);
std::vector<ComparisonRow> compareModes(const std::vector<RunRecord>& records);

void writeRunsCsv(std::ostream& out, const std::vector<RunRecord>& records);
void writeRoundsCsv(std::ostream& out, const std::vector<RunRecord>& records);
void writeAggregateCsv(std::ostream& out, const std::vector<AggregateRow>& rows);
void writeComparisonCsv(std::ostream& out, const std::vector<ComparisonRow>& rows);
void writeComparisonReport(std::ostream& out, const std::vector<ComparisonRow>& rows);

/// Fully expanded scenario (positions, capabilities, tasks) as pretty JSON.
std::string dumpScenarioJson(const ScenarioConfig& config);

struct ExperimentOutput {
  std::vector<RunRecord> runs;
  std::vector<AggregateRow> aggregate;
  std::vector<ComparisonRow> comparison;
};

/// Runs the experiment (or one sweep axis) and writes runs.csv, rounds.csv,
/// aggregate.csv, and comparison.csv/comparison.txt when both modes ran.
/// Throws std::runtime_error if output_dir cannot be written.
ExperimentOutput runExperiment(const ExperimentSpec& spec, std::optional<SweepAxis> axis = {});

}  // namespace clustask
