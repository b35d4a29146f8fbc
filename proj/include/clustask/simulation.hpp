// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "clustask/engine.hpp"
#include "clustask/event_log.hpp"
#include "clustask/metrics.hpp"
#include "clustask/protocol.hpp"
#include "clustask/scenario.hpp"

namespace clustask {

struct SimulationOptions {
  /// Keep every send, receive and state transition in RunResult::log.
  bool record_log = false;
  /// Tasks per dispatch round; 0 means the scenario's sm.
  std::uint32_t dispatch_sm = 0;
};

struct RunResult {
  std::vector<NodeState> nodes;
  ApState ap;
  MetricsLedger ledger;
  RunSummary summary;
  std::vector<LogRecord> log;
  double end_time_s = 0.0;
  std::uint64_t deliveries_scheduled = 0;
  std::uint64_t deliveries_executed = 0;
  /// Deliveries still queued past the end of the run.
  std::uint64_t deliveries_pending = 0;
};

/// One deterministic execution of a scenario: warm-up broadcasts, cluster
/// formation and leader registration, then the periodic dispatch/accept
/// rounds. Single-threaded; independent instances may run concurrently.
class Simulation {
 public:
  Simulation(ScenarioConfig config, Scenario scenario, SimulationOptions options = {});

  /// Runs to the configured end of the run.
  RunResult run();
  /// Processes events in (time, seq) order while their time is <= until_s.
  RunResult run(double until_s);

 private:
  struct OpenRound {
    std::uint32_t index = 0;
    double dispatch_time_s = 0.0;
    std::uint32_t nc = 0;
    std::set<TaskId> tasks;
    std::set<NodeId> accepting;
    std::vector<double> accept_times_s;
  };

  void scheduleInitialEvents();
  void handle(const Event& ev);
  void onTimer(NodeId target, const Timer& timer);
  void onNodeDelivery(NodeId target, const Delivery& d);
  void onApDelivery(const Delivery& d);
  void dispatchRound(std::uint32_t index);
  void confirmRound();
  void send(NodeId from, const Destination& to, const Message& msg);
  void log(LogRecord record);
  LogRecord messageRecord(LogEvent event, NodeId node, NodeId peer, const Message& msg) const;
  RunResult finish();

  ScenarioConfig config_;
  Scenario scenario_;
  SimulationOptions options_;
  std::vector<double> dispatch_times_;
  std::vector<NodeState> nodes_;
  ApState ap_;
  EventQueue queue_;
  Channel channel_;
  MetricsLedger ledger_;
  std::vector<LogRecord> log_;
  std::optional<OpenRound> open_round_;
  std::uint64_t scheduled_ = 0;
  std::uint64_t executed_ = 0;
  bool started_ = false;
};

/// Builds the scenario for `config` and runs it to the end.
RunResult simulate(const ScenarioConfig& config, SimulationOptions options = {});

}  // namespace clustask
