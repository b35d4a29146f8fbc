// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include "clustask/experiment.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "clustask/event_log.hpp"

namespace clustask {
namespace {

namespace fs = std::filesystem;

std::string num(double v) { return fmt::format("{}", v); }

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string axisCells(const std::optional<AxisPoint>& p) {
  if (!p) return ",";
  return std::string(toString(p->axis)) + "," + num(p->value);
}

std::vector<std::optional<double>> metricValues(const RunSummary& s) {
  return {s.nc,        s.nta,      s.nut,        s.nat,  s.allocation_rate, s.completed,
          s.mean_cpt,  s.mean_cit, s.mean_lat_s, s.ec_j, s.ec_nodes_j,      s.ec_ap_j};
}

std::ofstream openOutput(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void finishOutput(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string traceName(const std::optional<AxisPoint>& p, Mode mode, const ScenarioConfig& c) {
  std::string name;
  if (p) name = fmt::format("{}-{}_", toString(p->axis), p->value);
  return name + fmt::format("{}_n{}_sm{}_run{}.ndjson", toString(mode), c.node_count, c.sm,
                            c.run_number);
}

// Runs job(i) for i in [0, count) on up to `threads` workers.
void parallelFor(std::size_t count, std::uint32_t threads,
                 const std::function<void(std::size_t)>& job) {
  std::size_t workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

using GroupKey = std::tuple<bool, int, double, int, std::uint32_t, std::uint32_t>;

GroupKey groupKey(const RunRecord& r, bool with_mode) {
  return {r.point.has_value(), r.point ? static_cast<int>(r.point->axis) : 0,
          r.point ? r.point->value : 0.0, with_mode ? static_cast<int>(r.mode) : 0,
          r.config.node_count, r.config.sm};
}

}  // namespace

const std::vector<std::string>& aggregateMetricNames() {
  static const std::vector<std::string> names = {
      "nc",       "nta",      "nut",        "nat",  "allocation_rate", "completed",
      "mean_cpt", "mean_cit", "mean_lat_s", "ec_j", "ec_nodes_j",      "ec_ap_j"};
  return names;
}

RunResult runMode(const ScenarioConfig& config, Mode mode, bool record_log) {
  SimulationOptions options;
  options.record_log = record_log;
  if (mode == Mode::BaselineSingleTask) options.dispatch_sm = 1;
  return Simulation(config, buildScenario(config), options).run();
}

std::vector<RunRecord> executeRuns(const ExperimentSpec& spec, const ScenarioConfig& config,
                                   std::optional<AxisPoint> point,
                                   const std::optional<fs::path>& trace_dir) {
  std::vector<std::pair<Mode, std::uint32_t>> jobs;
  for (Mode m : spec.modes) {
    for (std::uint32_t run = 1; run <= spec.runs; ++run) jobs.emplace_back(m, run);
  }
  std::sort(jobs.begin(), jobs.end());

  std::vector<RunRecord> out(jobs.size());
  parallelFor(jobs.size(), spec.threads, [&](std::size_t i) {
    const auto [mode, run] = jobs[i];
    ScenarioConfig c = config;
    c.run_number = run;
    const Scenario scenario = buildScenario(c);
    SimulationOptions options;
    options.record_log = trace_dir.has_value();
    if (mode == Mode::BaselineSingleTask) options.dispatch_sm = 1;
    RunResult result = Simulation(c, scenario, options).run();

    if (trace_dir) {
      const fs::path path = *trace_dir / traceName(point, mode, c);
      auto file = openOutput(path);
      writeNdjson(file, result.log);
      finishOutput(file, path);
    }

    RunRecord& rec = out[i];
    rec.point = point;
    rec.mode = mode;
    rec.config = c;
    rec.seed = scenario.seed;
    rec.total_task_duration_s = scenario.totalTaskDuration();
    rec.summary = result.summary;
    rec.rounds = result.ledger.perRound();
  });
  return out;
}

std::vector<AggregateRow> aggregateRuns(const std::vector<RunRecord>& records) {
  std::map<GroupKey, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) groups[groupKey(r, true)].push_back(&r);

  std::vector<AggregateRow> rows;
  for (const auto& [key, members] : groups) {
    AggregateRow row;
    row.point = members.front()->point;
    row.mode = members.front()->mode;
    row.node_count = members.front()->config.node_count;
    row.sm = members.front()->config.sm;
    row.runs = static_cast<std::uint32_t>(members.size());
    const std::size_t metrics = aggregateMetricNames().size();
    for (std::size_t m = 0; m < metrics; ++m) {
      std::vector<double> values;
      for (const RunRecord* r : members) {
        if (auto v = metricValues(r->summary)[m]) values.push_back(*v);
      }
      row.stats.push_back(values.empty() ? MetricStat{} : aggregate(values, 0.95));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ComparisonRow> compareModes(const std::vector<RunRecord>& records) {
  // (point, n, sm) -> run_number -> (multi, baseline)
  std::map<GroupKey, std::map<std::uint32_t, std::pair<const RunRecord*, const RunRecord*>>> pairs;
  for (const auto& r : records) {
    auto& slot = pairs[groupKey(r, false)][r.config.run_number];
    (r.mode == Mode::MultiTask ? slot.first : slot.second) = &r;
  }

  std::vector<ComparisonRow> rows;
  for (const auto& [key, by_run] : pairs) {
    ComparisonRow row;
    for (const auto& [run, p] : by_run) {
      if (!p.first || !p.second) continue;
      const RunSummary& m = p.first->summary;
      const RunSummary& b = p.second->summary;
      row.point = p.first->point;
      row.node_count = p.first->config.node_count;
      row.sm = p.first->config.sm;
      ++row.pairs;
      row.multi_completed_mean += m.completed;
      row.baseline_completed_mean += b.completed;
      row.multi_nat_mean += m.nat;
      row.baseline_nat_mean += b.nat;
      if (m.completed >= b.completed) ++row.pairs_multi_not_worse;
      if (m.completed > b.completed) ++row.pairs_multi_better;
    }
    if (row.pairs == 0) continue;
    const double n = row.pairs;
    row.multi_completed_mean /= n;
    row.baseline_completed_mean /= n;
    row.multi_nat_mean /= n;
    row.baseline_nat_mean /= n;
    rows.push_back(row);
  }
  return rows;
}

void writeRunsCsv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "axis,axis_value,mode,node_count,sm,run_number,seed,nc,nta,nut,nat,allocation_rate,"
         "completed,mean_cpt,mean_cit,mean_lat_s,ec_j,ec_nodes_j,ec_ap_j,total_task_duration_s\n";
  for (const auto& r : records) {
    const RunSummary& s = r.summary;
    out << axisCells(r.point) << ',' << toString(r.mode) << ',' << r.config.node_count << ','
        << r.config.sm << ',' << r.config.run_number << ',' << r.seed << ',' << s.nc << ','
        << s.nta << ',' << s.nut << ',' << s.nat << ',' << num(s.allocation_rate) << ','
        << s.completed << ',' << num(s.mean_cpt) << ',' << num(s.mean_cit) << ','
        << num(s.mean_lat_s) << ',' << num(s.ec_j) << ',' << num(s.ec_nodes_j) << ','
        << num(s.ec_ap_j) << ',' << num(r.total_task_duration_s) << '\n';
  }
}

void writeRoundsCsv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "axis,axis_value,mode,node_count,sm,run_number,round,round_time_s,tasks_dispatched,nc,"
         "cpt,cit,lat_s\n";
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.rounds.size(); ++i) {
      const RoundMetrics& m = r.rounds[i];
      out << axisCells(r.point) << ',' << toString(r.mode) << ',' << r.config.node_count << ','
          << r.config.sm << ',' << r.config.run_number << ',' << i << ','
          << num(m.round_time_s) << ',' << m.tasks_dispatched << ',' << m.nc << ',' << m.cpt
          << ',' << m.cit << ',' << num(m.lat_s) << '\n';
    }
  }
}

void writeAggregateCsv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "axis,axis_value,mode,node_count,sm,runs";
  for (const auto& name : aggregateMetricNames()) out << ',' << name << "_mean," << name << "_ci95";
  out << '\n';
  for (const auto& row : rows) {
    out << axisCells(row.point) << ',' << toString(row.mode) << ',' << row.node_count << ','
        << row.sm << ',' << row.runs;
    for (const MetricStat& s : row.stats) {
      // A metric with no samples (e.g. LAT when nothing was accepted) stays blank.
      out << ',' << (s.samples ? num(s.mean) : std::string()) << ',' << num(s.half_width);
    }
    out << '\n';
  }
}

void writeComparisonCsv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "axis,axis_value,node_count,sm,pairs,multi_completed_mean,baseline_completed_mean,"
         "completed_delta,multi_nat_mean,baseline_nat_mean,nat_delta,pairs_multi_not_worse,"
         "pairs_multi_better\n";
  for (const auto& r : rows) {
    out << axisCells(r.point) << ',' << r.node_count << ',' << r.sm << ',' << r.pairs << ','
        << num(r.multi_completed_mean) << ',' << num(r.baseline_completed_mean) << ','
        << num(r.multi_completed_mean - r.baseline_completed_mean) << ','
        << num(r.multi_nat_mean) << ',' << num(r.baseline_nat_mean) << ','
        << num(r.multi_nat_mean - r.baseline_nat_mean) << ',' << r.pairs_multi_not_worse
        << ',' << r.pairs_multi_better << '\n';
  }
}

void writeComparisonReport(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  for (const auto& r : rows) {
    if (r.point) out << toString(r.point->axis) << '=' << r.point->value << ' ';
    const double gain = r.baseline_completed_mean > 0.0
                            ? r.multi_completed_mean / r.baseline_completed_mean - 1.0
                            : 0.0;
    out << fmt::format(
        "n={} sm={}: completed {:.2f} vs {:.2f} baseline ({:+.1f}%), NAT {:.2f} vs {:.2f} "
        "(delta {:+.2f}), multi-task not worse in {}/{} seed pairs\n",
        r.node_count, r.sm, r.multi_completed_mean, r.baseline_completed_mean, gain * 100.0,
        r.multi_nat_mean, r.baseline_nat_mean, r.multi_nat_mean - r.baseline_nat_mean,
        r.pairs_multi_not_worse, r.pairs);
  }
}

std::string dumpScenarioJson(const ScenarioConfig& config) {
  const Scenario s = buildScenario(config);
  nlohmann::ordered_json j;
  j["node_count"] = config.node_count;
  j["sm"] = config.sm;
  j["run_number"] = config.run_number;
  j["seed"] = s.seed;
  j["capability_seed"] = s.capability_seed;
  j["area_m"] = {config.area.x_m, config.area.y_m};
  j["placement"] = toString(config.placement);
  j["node_range_m"] = config.channel.node_range_m;
  j["join_threshold"] = config.scale.join_threshold;
  j["ap"] = {{"x", s.ap_position.x}, {"y", s.ap_position.y}};
  auto& nodes = j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : s.nodes) {
    nodes.push_back({{"id", n.id.value},
                     {"x", n.pos.x},
                     {"y", n.pos.y},
                     {"capabilities", toStrings(n.capabilities)}});
  }
  auto& tasks = j["tasks"] = nlohmann::ordered_json::array();
  for (const auto& t : s.tasks) {
    tasks.push_back({{"id", t.id.value},
                     {"required", toStrings(t.required)},
                     {"duration_s", t.duration_s},
                     {"quorum", t.quorum}});
  }
  j["total_task_duration_s"] = s.totalTaskDuration();
  return j.dump(2) + "\n";
}

ExperimentOutput runExperiment(const ExperimentSpec& spec, std::optional<SweepAxis> axis) {
  spec.validate();
  std::error_code ec;
  fs::create_directories(spec.output_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + spec.output_dir.string() + ": " + ec.message());
  std::optional<fs::path> trace_dir;
  if (spec.trace) {
    trace_dir = spec.output_dir / "traces";
    fs::create_directories(*trace_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + trace_dir->string() + ": " + ec.message());
  }

  ExperimentOutput out;
  if (axis) {
    const auto it = spec.sweep.find(*axis);
    if (it == spec.sweep.end() || it->second.empty()) {
      throw std::invalid_argument("no values listed for sweep axis '" + std::string(toString(*axis)) +
                                  "'");
    }
    for (double v : it->second) {
      auto part = executeRuns(spec, applyAxis(spec.scenario, *axis, v), AxisPoint{*axis, v}, trace_dir);
      std::move(part.begin(), part.end(), std::back_inserter(out.runs));
    }
  } else {
    out.runs = executeRuns(spec, spec.scenario, std::nullopt, trace_dir);
  }
  out.aggregate = aggregateRuns(out.runs);
  out.comparison = compareModes(out.runs);

  const auto write = [&](const char* name, auto&& writer) {
    const fs::path path = spec.output_dir / name;
    auto file = openOutput(path);
    writer(file);
    finishOutput(file, path);
  };
  write("runs.csv", [&](std::ostream& o) { writeRunsCsv(o, out.runs); });
  write("rounds.csv", [&](std::ostream& o) { writeRoundsCsv(o, out.runs); });
  write("aggregate.csv", [&](std::ostream& o) { writeAggregateCsv(o, out.aggregate); });
  if (!out.comparison.empty()) {
    write("comparison.csv", [&](std::ostream& o) { writeComparisonCsv(o, out.comparison); });
    write("comparison.txt", [&](std::ostream& o) { writeComparisonReport(o, out.comparison); });
  }
  return out;
}

}  // namespace clustask
