// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include "clustask/simulation.hpp"

#include <spdlog/spdlog.h>

#include <stdexcept>
#include <string>

namespace clustask {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::vector<Position> positionsOf(const Scenario& s) {
  std::vector<Position> out;
  out.reserve(s.nodes.size());
  for (const auto& n : s.nodes) out.push_back(n.pos);
  return out;
}

}  // namespace

Simulation::Simulation(ScenarioConfig config, Scenario scenario, SimulationOptions options)
    : config_(std::move(config)),
      scenario_(std::move(scenario)),
      options_(options),
      dispatch_times_(config_.protocol.dispatchTimes()),
      nodes_(scenario_.nodes),
      ap_(makeApState(scenario_.tasks, options.dispatch_sm == 0 ? config_.sm : options.dispatch_sm,
                      config_.protocol.confirmation_window_s)),
      channel_(config_.channel, positionsOf(scenario_), scenario_.ap_position),
      ledger_(scenario_.nodes.size(), config_.radio) {
  config_.validate();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id.value != i) throw std::invalid_argument("node ids must be 0..n-1 in order");
  }
}

RunResult Simulation::run() {
  return run(config_.protocol.run_until_s);
}

RunResult Simulation::run(double until_s) {
  if (started_) throw std::logic_error("a Simulation runs once");
  started_ = true;
  scheduleInitialEvents();
  while (!queue_.empty() && queue_.nextTime() <= until_s) {
    handle(queue_.pop());
  }
  return finish();
}

void Simulation::scheduleInitialEvents() {
  if (nodes_.empty()) return;
  const auto& p = config_.protocol;
  for (const auto& node : nodes_) {
    queue_.schedule(0.0, node.id, Timer{TimerTag::WarmUpBroadcast, 0});
  }
  // Warm-up completion precedes any dispatch round at the same instant.
  for (const auto& node : nodes_) {
    queue_.schedule(p.warmup_duration_s, node.id, Timer{TimerTag::FinishWarmUp, 0});
  }
  for (std::size_t r = 0; r < dispatch_times_.size(); ++r) {
    queue_.schedule(dispatch_times_[r], kAccessPoint,
                    Timer{TimerTag::DispatchRound, static_cast<std::uint32_t>(r)});
  }
}

void Simulation::handle(const Event& ev) {
  std::visit(Overloaded{
                 [&](const Timer& t) { onTimer(ev.target, t); },
                 [&](const Delivery& d) {
                   ++executed_;
                   const auto kind = kindOf(d.msg);
                   ledger_.recordRx(ev.target, config_.message_bits.bitsFor(kind));
                   log(messageRecord(LogEvent::Receive, ev.target, d.from, d.msg));
                   if (ev.target == kAccessPoint) {
                     onApDelivery(d);
                   } else {
                     onNodeDelivery(ev.target, d);
                   }
                 },
             },
             ev.payload);
}

void Simulation::onTimer(NodeId target, const Timer& timer) {
  const double now = queue_.now();
  const auto& p = config_.protocol;
  switch (timer.tag) {
    case TimerTag::WarmUpBroadcast: {
      NodeState& node = nodes_.at(target.value);
      if (auto msg = warmUpBroadcast(node, now, p)) {
        send(node.id, BroadcastNeighborhood{}, *msg);
      }
      const double next = static_cast<double>(timer.arg + 1) * p.warmup_broadcast_period_s;
      if (next < p.warmup_duration_s) {
        queue_.schedule(next, target, Timer{TimerTag::WarmUpBroadcast, timer.arg + 1});
      }
      break;
    }
    case TimerTag::FinishWarmUp: {
      NodeState& node = nodes_.at(target.value);
      auto outcome = finishWarmUp(std::move(node), config_.scale);
      node = std::move(outcome.node);
      LogRecord rec;
      rec.time_s = now;
      rec.node = node.id;
      rec.event = LogEvent::ClusterFormed;
      rec.caps = node.capabilities;
      rec.count = static_cast<std::uint32_t>(node.cluster_view.size());
      log(rec);
      if (outcome.registration) {
        rec.event = LogEvent::LeaderElected;
        log(rec);
        send(node.id, ToAP{}, *outcome.registration);
      }
      break;
    }
    case TimerTag::DispatchRound:
      dispatchRound(timer.arg);
      break;
    case TimerTag::ConfirmationCheck:
      confirmRound();
      break;
    case TimerTag::TaskComplete: {
      const TaskId id{timer.arg};
      ap_.task(id) = taskComplete(std::move(ap_.task(id)), now);
      LogRecord rec;
      rec.time_s = now;
      rec.node = kAccessPoint;
      rec.event = LogEvent::TaskCompleted;
      rec.task = id;
      log(rec);
      break;
    }
  }
}

void Simulation::dispatchRound(std::uint32_t index) {
  const double now = queue_.now();
  if (ap_.pending_tasks.empty()) return;
  if (ap_.leader_list.empty()) {
    // Registrations sent at the end of warm-up are still in flight; retry
    // one hop later, as long as that stays inside this round's slot.
    const double retry = now + config_.channel.hop_delay_s;
    const double next_round = index + 1 < dispatch_times_.size()
                                  ? dispatch_times_[index + 1]
                                  : config_.protocol.run_until_s;
    if (retry < next_round) {
      queue_.schedule(retry, kAccessPoint, Timer{TimerTag::DispatchRound, index});
    } else {
      spdlog::warn("dispatch round {} skipped: no registered leaders", index);
    }
    return;
  }

  const auto nc = static_cast<std::uint32_t>(ap_.leader_list.size());
  auto round = apDispatchRound(std::move(ap_), now);
  ap_ = std::move(round.ap);

  OpenRound open;
  open.index = index;
  open.dispatch_time_s = now;
  open.nc = nc;
  for (TaskId id : ap_.dispatched_this_round) {
    open.tasks.insert(id);
    LogRecord rec;
    rec.time_s = now;
    rec.node = kAccessPoint;
    rec.event = LogEvent::TaskDispatched;
    rec.task = id;
    rec.caps = ap_.task(id).spec.required;
    rec.count = nc;
    log(rec);
  }
  open_round_ = std::move(open);

  for (const auto& [leader, msg] : round.dispatches) {
    send(kAccessPoint, Unicast{leader}, msg);
  }
  queue_.schedule(now + ap_.confirmation_window_s, kAccessPoint,
                  Timer{TimerTag::ConfirmationCheck, index});
}

void Simulation::confirmRound() {
  const double now = queue_.now();
  auto outcome = apConfirmationCheck(std::move(ap_), now);
  ap_ = std::move(outcome.ap);
  if (!open_round_) throw std::logic_error("confirmation check without an open round");
  const OpenRound round = std::move(*open_round_);
  open_round_.reset();

  RoundMetrics m;
  m.round_time_s = round.dispatch_time_s;
  m.tasks_dispatched = static_cast<std::uint32_t>(round.tasks.size());
  m.nc = round.nc;
  std::tie(m.cpt, m.cit) = roundMetrics(round.accepting, round.nc);
  m.lat_s = roundLatency(round.dispatch_time_s, round.accept_times_s);
  ledger_.addRound(m);

  for (TaskId id : outcome.reverted) {
    LogRecord rec;
    rec.time_s = now;
    rec.node = kAccessPoint;
    rec.event = LogEvent::TaskReverted;
    rec.task = id;
    log(rec);
  }
  LogRecord rec;
  rec.time_s = now;
  rec.node = kAccessPoint;
  rec.event = LogEvent::RoundClosed;
  rec.count = m.cpt;
  rec.aux = m.cit;
  rec.value = m.lat_s;
  log(rec);
}

void Simulation::onNodeDelivery(NodeId target, const Delivery& d) {
  NodeState& node = nodes_.at(target.value);
  std::visit(Overloaded{
                 [&](const CapabilityDissemination& m) { node = recvCapabilities(std::move(node), m); },
                 [&](const TaskDispatch& m) {
                   if (auto resp = leaderRecvTask(node, m.task, config_.protocol.leader_check)) {
                     send(node.id, ToAP{}, resp->accept);
                     send(node.id, BroadcastNeighborhood{}, resp->dissemination);
                   }
                 },
                 [&](const LeaderToCluster& m) {
                   if (recvLeaderToCluster(node, m)) {
                     LogRecord rec;
                     rec.time_s = queue_.now();
                     rec.node = node.id;
                     rec.event = LogEvent::TaskAssigned;
                     rec.peer = m.leader;
                     rec.task = m.task.id;
                     log(rec);
                   }
                 },
                 [&](const LeaderRegister&) {
                   throw std::logic_error("leader registration delivered to a node");
                 },
                 [&](const TaskAccept&) {
                   throw std::logic_error("task accept delivered to a node");
                 },
             },
             d.msg);
}

void Simulation::onApDelivery(const Delivery& d) {
  const double now = queue_.now();
  std::visit(Overloaded{
                 [&](const LeaderRegister& m) {
                   const bool fresh = !ap_.leader_list.contains(m.leader);
                   ap_ = apRecvLeaderRegister(std::move(ap_), m);
                   if (fresh) {
                     LogRecord rec;
                     rec.time_s = now;
                     rec.node = kAccessPoint;
                     rec.event = LogEvent::LeaderRegistered;
                     rec.peer = m.leader;
                     rec.count = static_cast<std::uint32_t>(ap_.leader_list.size());
                     log(rec);
                   }
                 },
                 [&](const TaskAccept& m) {
                   auto outcome = apRecvTaskAccept(std::move(ap_), m, now);
                   ap_ = std::move(outcome.ap);
                   if (!outcome.recorded) return;
                   LogRecord rec;
                   rec.time_s = now;
                   rec.node = kAccessPoint;
                   rec.event = LogEvent::TaskAccepted;
                   rec.peer = m.leader;
                   rec.task = m.task_id;
                   log(rec);
                   if (open_round_ && open_round_->tasks.contains(m.task_id)) {
                     open_round_->accepting.insert(m.leader);
                     open_round_->accept_times_s.push_back(now);
                   }
                   if (outcome.first_accept) {
                     queue_.schedule(now + ap_.task(m.task_id).spec.duration_s, kAccessPoint,
                                     Timer{TimerTag::TaskComplete, m.task_id.value});
                   }
                 },
                 [&](const auto& m) {
                   throw std::logic_error("access point cannot handle " +
                                          std::string(toString(kindOf(Message{m}))));
                 },
             },
             d.msg);
}

void Simulation::send(NodeId from, const Destination& to, const Message& msg) {
  const double now = queue_.now();
  const std::uint32_t bits = config_.message_bits.bitsFor(kindOf(msg));
  for (auto& tx : channel_.transmit(from, to, now)) {
    ledger_.recordTx(from, bits, tx.tx_distance_m);
    LogRecord rec = messageRecord(LogEvent::Send, from, from, msg);
    rec.peer.reset();
    if (!std::holds_alternative<BroadcastNeighborhood>(to) && !tx.recipients.empty()) {
      rec.peer = tx.recipients.front().id;
    }
    rec.distance_m = tx.tx_distance_m;
    rec.aux = static_cast<std::uint32_t>(tx.recipients.size());
    if (tx.depart_s != now) rec.value = tx.depart_s;
    log(std::move(rec));
    for (const auto& r : tx.recipients) {
      queue_.schedule(tx.arrive_s, r.id, Delivery{msg, from});
      ++scheduled_;
    }
  }
}

LogRecord Simulation::messageRecord(LogEvent event, NodeId node, NodeId peer,
                                    const Message& msg) const {
  LogRecord rec;
  rec.time_s = queue_.now();
  rec.node = node;
  rec.event = event;
  rec.message = kindOf(msg);
  rec.peer = peer;
  rec.size_bits = config_.message_bits.bitsFor(*rec.message);
  std::visit(Overloaded{
                 [&](const CapabilityDissemination& m) {
                   rec.caps = m.caps;
                   rec.count = m.neighborhood_size;
                 },
                 [&](const LeaderRegister&) {},
                 [&](const TaskDispatch& m) {
                   rec.task = m.task.id;
                   rec.caps = m.task.required;
                   rec.count = m.task.quorum;
                 },
                 [&](const TaskAccept& m) { rec.task = m.task_id; },
                 [&](const LeaderToCluster& m) {
                   rec.task = m.task.id;
                   rec.caps = m.task.required;
                   rec.count = m.task.quorum;
                 },
             },
             msg);
  return rec;
}

void Simulation::log(LogRecord record) {
  if (options_.record_log) log_.push_back(std::move(record));
}

RunResult Simulation::finish() {
  std::uint32_t nut = 0;
  std::uint32_t completed = 0;
  for (const Task& t : ap_.tasks) {
    if (t.accept_times_s.empty()) ++nut;
    if (t.status == TaskStatus::Completed) ++completed;
  }
  ledger_.setCounts(static_cast<std::uint32_t>(ap_.leader_list.size()),
                    static_cast<std::uint32_t>(ap_.tasks.size()), nut, completed);

  RunResult out;
  out.end_time_s = queue_.now();
  out.deliveries_scheduled = scheduled_;
  out.deliveries_executed = executed_;
  out.deliveries_pending = scheduled_ - executed_;
  out.summary = runSummary(ledger_);
  out.nodes = std::move(nodes_);
  out.ap = std::move(ap_);
  out.ledger = std::move(ledger_);
  out.log = std::move(log_);
  return out;
}

RunResult simulate(const ScenarioConfig& config, SimulationOptions options) {
  return Simulation(config, buildScenario(config), options).run();
}

}  // namespace clustask
