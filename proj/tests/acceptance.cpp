// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "clustask/experiment.hpp"
#include "clustask/simulation.hpp"
#include "support/oracles.hpp"

using namespace clustask;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("AC%-2d %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double secondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class F>
void parallelFor(std::size_t n, F&& job) {
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

constexpr std::uint32_t kRuns = 35;
const std::vector<std::uint32_t> kNodeCounts = {50, 100, 150};
const std::vector<std::uint32_t> kDemands = {2, 4};

struct RunOutcome {
  RunSummary multi;
  RunSummary baseline;
  std::size_t soundness_violations = 0;
  std::size_t accepts = 0;
  bool identities = true;
  bool baseline_identities = true;
  bool lat_in_bounds = true;
  std::size_t lat_rounds = 0;
  double wall_s = 0.0;
};

bool identitiesHold(const RunResult& r) {
  if (r.summary.nat + r.summary.nut != r.summary.nta) return false;
  for (const auto& round : r.ledger.perRound()) {
    if (round.cpt + round.cit != round.nc) return false;
  }
  return true;
}

RunOutcome runStandard(std::uint32_t n, std::uint32_t sm, std::uint32_t run) {
  const auto t0 = Clock::now();
  ScenarioConfig c;
  c.node_count = n;
  c.sm = sm;
  c.run_number = run;
  const Scenario scenario = buildScenario(c);

  SimulationOptions traced;
  traced.record_log = true;
  const RunResult multi = Simulation(c, scenario, traced).run();
  SimulationOptions single;
  single.dispatch_sm = 1;
  const RunResult base = Simulation(c, scenario, single).run();

  RunOutcome out;
  out.multi = multi.summary;
  out.baseline = base.summary;
  out.soundness_violations = oracle::auditAccepts(multi.log).size();
  for (const auto& rec : multi.log) {
    if (rec.event == LogEvent::Send && rec.message == MessageKind::TaskAccept) ++out.accepts;
  }
  out.identities = identitiesHold(multi);
  out.baseline_identities = identitiesHold(base);
  for (const auto& round : multi.ledger.perRound()) {
    if (!round.lat_s) continue;
    ++out.lat_rounds;
    if (*round.lat_s < c.channel.hop_delay_s - 1e-12 || *round.lat_s > c.protocol.confirmation_window_s) {
      out.lat_in_bounds = false;
    }
  }
  out.wall_s = secondsSince(t0);
  return out;
}

void ac1ClusteringOracle() {
  const auto t0 = Clock::now();
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> coord(0.0, 120.0);
  std::uniform_int_distribution<int> count(1, 12);
  std::uniform_int_distribution<int> mask(1, 4095);
  std::size_t nodes_checked = 0;
  std::size_t mismatches = 0;
  for (int s = 0; s < 200; ++s) {
    const int n = count(gen);
    Scenario sc;
    std::vector<oracle::StaticNode> ref;
    for (int i = 0; i < n; ++i) {
      NodeState node;
      node.id = NodeId{static_cast<std::uint32_t>(i)};
      node.pos = {coord(gen), coord(gen)};
      node.capabilities = CapabilitySet::fromMask(static_cast<std::uint16_t>(mask(gen)));
      ref.push_back({node.pos.x, node.pos.y, oracle::toVec(node.capabilities)});
      sc.nodes.push_back(node);
    }
    sc.ap_position = {100, 100};
    ScenarioConfig c;
    c.scale.join_threshold = std::vector<double>{0.5, 0.6, 0.7, 0.8, 0.87}[s % 5];
    const auto result = Simulation(c, sc, {}).run(c.protocol.warmup_duration_s + 0.5);
    const auto expected = oracle::clusterViews(ref, c.channel.node_range_m, c.scale.join_threshold);
    for (int i = 0; i < n; ++i) {
      std::set<std::uint32_t> got;
      for (NodeId id : result.nodes[i].cluster_view) got.insert(id.value);
      ++nodes_checked;
      if (got != expected[i]) ++mismatches;
    }
  }
  const double t = secondsSince(t0);
  report(1, mismatches == 0 && t < 5.0,
         fmt::format("cluster views vs brute force: {} nodes in 200 scenarios, {} mismatches, {:.2f} s (limit 5 s)",
                     nodes_checked, mismatches, t));
}

void ac2Similarity() {
  const CapabilitySet a{Capability::Temperature, Capability::Humidity, Capability::Light};
  const CapabilitySet b{Capability::Temperature, Capability::Humidity, Capability::Light,
                        Capability::BodyTemperature};
  const double v = similarity(a, b);
  std::mt19937 gen(99);
  std::uniform_int_distribution<int> mask(1, 4095);
  int exact = 0;
  for (int i = 0; i < 100; ++i) {
    const auto s = CapabilitySet::fromMask(static_cast<std::uint16_t>(mask(gen)));
    if (similarity(s, s) == 1.0) ++exact;
  }
  report(2, std::abs(v - 0.8660) <= 1e-4 && std::abs(v - std::sqrt(0.75)) <= 1e-9 && exact == 100,
         fmt::format("sim(3 caps, 4 caps) = {:.10f} (target 0.8660, exact sqrt(3)/2 within 1e-9); "
                     "sim(a,a) == 1.0 for {}/100 random sets",
                     v, exact));
}

void ac7Determinism(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& configs) {
  bool logs_equal = true;
  std::size_t compared = 0;
  for (auto [n, sm] : configs) {
    ScenarioConfig c;
    c.node_count = n;
    c.sm = sm;
    c.run_number = 3;
    SimulationOptions o;
    o.record_log = true;
    const auto a = Simulation(c, buildScenario(c), o).run();
    const auto b = Simulation(c, buildScenario(c), o).run();
    std::ostringstream sa, sb;
    writeNdjson(sa, a.log);
    writeNdjson(sb, b.log);
    logs_equal &= sa.str() == sb.str();
    compared += a.log.size();
  }

  ExperimentSpec spec;
  spec.runs = 5;
  spec.modes = {Mode::MultiTask, Mode::BaselineSingleTask};
  const fs::path root = fs::temp_directory_path() / "clustask_acceptance_determinism";
  fs::remove_all(root);
  spec.output_dir = root / "a";
  spec.threads = 1;
  runExperiment(spec);
  spec.output_dir = root / "b";
  spec.threads = 0;
  runExperiment(spec);
  bool csv_equal = true;
  for (const char* f : {"runs.csv", "rounds.csv", "aggregate.csv", "comparison.csv"}) {
    auto read = [&](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream s;
      s << in.rdbuf();
      return s.str();
    };
    csv_equal &= read(root / "a" / f) == read(root / "b" / f) && !read(root / "a" / f).empty();
  }
  fs::remove_all(root);
  report(7, logs_equal && csv_equal,
         fmt::format("6 configs executed twice: event logs {} ({} records); CSVs from sequential vs "
                     "parallel runs {}",
                     logs_equal ? "identical" : "DIFFER", compared, csv_equal ? "identical" : "DIFFER"));
}

void ac10Statistics() {
  double worst = 0.0;
  for (const auto& c : oracle::tIntervalCases()) {
    const auto s = aggregate(c.values, 0.95);
    worst = std::max(worst, std::abs(s.mean - c.mean));
    worst = std::max(worst, s.half_width ? std::abs(*s.half_width - c.half_width) : 1.0);
  }
  report(10, worst <= 1e-9,
         fmt::format("t-interval half-widths on {} reference datasets, max abs error {:.3e} (tol 1e-9)",
                     oracle::tIntervalCases().size(), worst));
}

}  // namespace

int main() {
  std::printf("acceptance: %u runs per scenario, node counts 50/100/150, demands A (sm=2) and B (sm=4)\n",
              kRuns);
  ac1ClusteringOracle();
  ac2Similarity();

  // Every standard scenario, every run, multi-task and baseline on the same seed.
  struct Key {
    std::uint32_t n, sm, run;
  };
  std::vector<Key> keys;
  for (auto n : kNodeCounts)
    for (auto sm : kDemands)
      for (std::uint32_t r = 1; r <= kRuns; ++r) keys.push_back({n, sm, r});
  std::vector<RunOutcome> outcomes(keys.size());
  const auto t_all = Clock::now();
  parallelFor(keys.size(), [&](std::size_t i) { outcomes[i] = runStandard(keys[i].n, keys[i].sm, keys[i].run); });
  std::printf("     (%zu standard runs in %.1f s)\n", keys.size(), secondsSince(t_all));

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<const RunOutcome*>> by;
  for (std::size_t i = 0; i < keys.size(); ++i) by[{keys[i].n, keys[i].sm}].push_back(&outcomes[i]);
  auto mean = [](const std::vector<const RunOutcome*>& v, auto field) {
    double s = 0.0;
    for (const RunOutcome* o : v) s += field(*o);
    return s / static_cast<double>(v.size());
  };

  // AC3
  std::size_t violations = 0, accepts = 0;
  for (const auto& o : outcomes) {
    violations += o.soundness_violations;
    accepts += o.accepts;
  }
  report(3, violations == 0,
         fmt::format("{} TaskAccept events audited from event logs across {} runs, {} violations",
                     accepts, outcomes.size(), violations));

  // AC4: each demand suite at 50 nodes, timed as one sequential suite of 35 runs.
  {
    bool pass = true;
    std::string detail;
    for (auto [sm, floor] : {std::pair{2u, 0.90}, std::pair{4u, 0.80}}) {
      const auto t0 = Clock::now();
      std::vector<double> rates;
      for (std::uint32_t r = 1; r <= kRuns; ++r) {
        ScenarioConfig c;
        c.node_count = 50;
        c.sm = sm;
        c.run_number = r;
        rates.push_back(simulate(c).summary.allocation_rate);
      }
      const double t = secondsSince(t0);
      const auto stat = aggregate(rates);
      pass &= stat.mean >= floor && t < 120.0;
      detail += fmt::format("{}demand {}: mean NAT/NTA {:.4f} ± {:.4f} (floor {:.2f}) in {:.1f} s",
                            detail.empty() ? "" : "; ", sm == 2 ? "A" : "B", stat.mean,
                            stat.half_width.value_or(0.0), floor, t);
    }
    report(4, pass, detail + " (limit 120 s each)");
  }

  // AC5
  {
    std::size_t bad = 0;
    for (const auto& o : outcomes) bad += (!o.identities) + (!o.baseline_identities);
    report(5, bad == 0,
           fmt::format("NAT + NUT == NTA and per-round CPT + CIT == NC in {} runs (both modes), {} failures",
                       2 * outcomes.size(), bad));
  }

  // AC6
  {
    std::size_t pairs = 0, not_worse = 0;
    bool strictly_more_somewhere = false;
    std::string detail;
    for (const auto& [key, v] : by) {
      std::size_t nw = 0;
      for (const RunOutcome* o : v) nw += o->multi.completed >= o->baseline.completed;
      pairs += v.size();
      not_worse += nw;
      const double m = mean(v, [](const RunOutcome& o) { return double(o.multi.completed); });
      const double b = mean(v, [](const RunOutcome& o) { return double(o.baseline.completed); });
      strictly_more_somewhere |= m > b;
      detail += fmt::format(" n={} sm={}: {:.2f} vs {:.2f} ({:+.0f}%);", key.first, key.second, m, b,
                            b > 0 ? (m / b - 1.0) * 100.0 : 0.0);
    }
    const double frac = static_cast<double>(not_worse) / static_cast<double>(pairs);
    report(6, frac >= 0.90 && strictly_more_somewhere,
           fmt::format("multi-task completes >= baseline in {}/{} seed pairs ({:.1f}%, need 90%); "
                       "completed by 900 s, multi vs baseline:{}",
                       not_worse, pairs, frac * 100.0, detail));
  }

  ac7Determinism({{50, 2}, {50, 4}, {100, 2}, {100, 4}, {150, 2}, {150, 4}});

  // AC8
  {
    bool pass = true;
    std::string detail;
    for (auto sm : kDemands) {
      const double e50 = mean(by[{50, sm}], [](const RunOutcome& o) { return o.multi.ec_j; });
      const double e100 = mean(by[{100, sm}], [](const RunOutcome& o) { return o.multi.ec_j; });
      const double e150 = mean(by[{150, sm}], [](const RunOutcome& o) { return o.multi.ec_j; });
      pass &= e150 > e100 && e100 > e50;
      detail += fmt::format("demand {}: EC 50/100/150 = {:.4f}/{:.4f}/{:.4f} J; ", sm == 2 ? "A" : "B",
                            e50, e100, e150);
    }
    for (auto n : kNodeCounts) {
      const double a = mean(by[{n, 2}], [](const RunOutcome& o) { return o.multi.ec_j; });
      const double b = mean(by[{n, 4}], [](const RunOutcome& o) { return o.multi.ec_j; });
      const double var = std::abs(b - a) / a;
      pass &= var <= 0.40;
      detail += fmt::format("n={} |B-A|/A = {:.1f}%; ", n, var * 100.0);
    }
    report(8, pass, detail + "(monotone in n; variation tol 40%)");
  }

  // AC9
  {
    bool bounds = true;
    std::size_t rounds = 0;
    bool order = true;
    std::string detail;
    for (const auto& o : outcomes) {
      bounds &= o.lat_in_bounds;
      rounds += o.lat_rounds;
    }
    for (const auto& [key, v] : by) {
      double s = 0.0;
      int k = 0;
      for (const RunOutcome* o : v) {
        if (o->multi.mean_lat_s) {
          s += *o->multi.mean_lat_s;
          ++k;
        }
      }
      const double lat = k ? s / k : 0.0;
      order &= k > 0 && lat >= 0.028 / 5.0 && lat <= 0.064 * 5.0;
      detail += fmt::format(" n={} sm={}: {:.1f} ms;", key.first, key.second, lat * 1e3);
    }
    report(9, bounds && order,
           fmt::format("{} accepted rounds, all LAT in [2 ms, 1 s]: {}; mean LAT within [5.6, 320] ms:{}",
                       rounds, bounds ? "yes" : "NO", detail));
  }

  ac10Statistics();

  std::printf("acceptance: %s (%d failing)\n", failures == 0 ? "all criteria pass" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
