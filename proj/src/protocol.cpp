// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include "clustask/protocol.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace clustask {
namespace {

// Schedules are built by multiplication so that round k lands on the same
// double regardless of how many rounds came before it.
std::vector<double> ticks(double start, double step, double stop, bool inclusive) {
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double t = start + static_cast<double>(k) * step;
    if (inclusive ? t > stop + 1e-9 : t >= stop - 1e-9) break;
    out.push_back(t);
  }
  return out;
}

}  // namespace

void ProtocolConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(warmup_duration_s, "warmup_duration_s");
  positive(warmup_broadcast_period_s, "warmup_broadcast_period_s");
  positive(dispatch_period_s, "dispatch_period_s");
  positive(first_dispatch_s, "first_dispatch_s");
  positive(last_dispatch_s, "last_dispatch_s");
  positive(confirmation_window_s, "confirmation_window_s");
  positive(run_until_s, "run_until_s");
  if (first_dispatch_s < warmup_duration_s) {
    throw std::invalid_argument("first_dispatch_s must not precede the end of warm-up");
  }
  if (last_dispatch_s < first_dispatch_s) {
    throw std::invalid_argument("last_dispatch_s must not precede first_dispatch_s");
  }
  if (confirmation_window_s >= dispatch_period_s) {
    throw std::invalid_argument("confirmation_window_s must be shorter than dispatch_period_s");
  }
}

std::vector<double> ProtocolConfig::dispatchTimes() const {
  return ticks(first_dispatch_s, dispatch_period_s, last_dispatch_s, true);
}

std::vector<double> ProtocolConfig::warmupBroadcastTimes() const {
  return ticks(0.0, warmup_broadcast_period_s, warmup_duration_s, false);
}

std::optional<CapabilityDissemination> warmUpBroadcast(const NodeState& node, double now,
                                                       const ProtocolConfig& config) {
  if (now >= config.warmup_duration_s) return std::nullopt;
  return CapabilityDissemination{node.id, node.capabilities, node.neighborhoodSize()};
}

NodeState recvCapabilities(NodeState node, const CapabilityDissemination& msg) {
  if (msg.sender == node.id) {
    spdlog::warn("node {} ignored its own capability broadcast", node.id.value);
    return node;
  }
  node.neighbor_table[msg.sender] = NeighborInfo{msg.caps, msg.neighborhood_size};
  return node;
}

WarmUpOutcome finishWarmUp(NodeState node, const SimilarityScale& scale) {
  node.cluster_view = buildClusterView(node, scale);
  WarmUpOutcome out;
  if (selectLeader(node) == node.id) {
    node.role = Role::Leader;
    out.registration = LeaderRegister{node.id};
  } else {
    node.role = Role::Common;
  }
  out.node = std::move(node);
  return out;
}

bool recvLeaderToCluster(NodeState& node, const LeaderToCluster& msg) {
  if (!node.cluster_view.contains(msg.leader)) return false;
  node.assigned_tasks.push_back(msg.task.id);
  return true;
}

CapabilitySet offeredCapabilities(const NodeState& leader, LeaderCheck check) {
  CapabilitySet offered = leader.capabilities;
  if (check == LeaderCheck::ClusterUnion) {
    for (NodeId member : leader.cluster_view) {
      const auto it = leader.neighbor_table.find(member);
      if (it != leader.neighbor_table.end()) offered = offered | it->second.capabilities;
    }
  }
  return offered;
}

std::optional<LeaderResponse> leaderRecvTask(const NodeState& leader, const TaskSpec& task,
                                             LeaderCheck check) {
  if (leader.role != Role::Leader) {
    throw std::logic_error("node " + std::to_string(leader.id.value) +
                           " received a task without being a leader");
  }
  if (!task.required.isSubsetOf(offeredCapabilities(leader, check))) return std::nullopt;
  if (leader.cluster_view.size() < task.quorum) return std::nullopt;
  return LeaderResponse{TaskAccept{task.id, leader.id}, LeaderToCluster{task, leader.id}};
}

Task& ApState::task(TaskId id) {
  return tasks.at(id.value);
}

const Task& ApState::task(TaskId id) const {
  return tasks.at(id.value);
}

void ApState::checkInvariants() const {
  if (sm < 1) throw std::logic_error("sm must be at least 1");
  std::vector<int> seen(tasks.size(), 0);
  for (TaskId id : pending_tasks) ++seen.at(id.value);
  for (TaskId id : dispatched_this_round) ++seen.at(id.value);
  for (const Task& t : tasks) {
    if (t.status == TaskStatus::Completed) ++seen.at(t.spec.id.value);
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i] > 1) {
      throw std::logic_error("task " + std::to_string(i) + " tracked in more than one place");
    }
  }
}

ApState makeApState(std::span<const TaskSpec> tasks, std::uint32_t sm,
                    double confirmation_window_s) {
  if (sm < 1) throw std::invalid_argument("sm must be at least 1");
  ApState ap;
  ap.sm = sm;
  ap.confirmation_window_s = confirmation_window_s;
  ap.tasks.reserve(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].id.value != i) throw std::invalid_argument("task ids must be dense and ordered");
    tasks[i].validate();
    ap.tasks.push_back(Task{tasks[i], TaskStatus::Pending, std::nullopt, {}});
    ap.pending_tasks.push_back(tasks[i].id);
  }
  return ap;
}

ApState apRecvLeaderRegister(ApState ap, const LeaderRegister& msg) {
  ap.leader_list.insert(msg.leader);
  return ap;
}

DispatchRound apDispatchRound(ApState ap, double now) {
  if (ap.leader_list.empty()) throw std::logic_error("dispatch round without registered leaders");
  if (!ap.dispatched_this_round.empty()) {
    throw std::logic_error("dispatch round started before the previous one was confirmed");
  }
  DispatchRound round;
  const std::size_t take = std::min<std::size_t>(ap.sm, ap.pending_tasks.size());
  for (std::size_t i = 0; i < take; ++i) {
    const TaskId id = ap.pending_tasks.front();
    ap.pending_tasks.pop_front();
    Task& task = ap.task(id);
    task.markDispatched(now);
    ap.dispatched_this_round.push_back(id);
    for (NodeId leader : ap.leader_list) {
      round.dispatches.emplace_back(leader, TaskDispatch{task.spec});
    }
  }
  round.ap = std::move(ap);
  return round;
}

AcceptOutcome apRecvTaskAccept(ApState ap, const TaskAccept& msg, double now) {
  AcceptOutcome out;
  if (msg.task_id.value >= ap.tasks.size()) {
    spdlog::warn("AP received an accept for unknown task {}", msg.task_id.value);
    out.ap = std::move(ap);
    return out;
  }
  Task& task = ap.task(msg.task_id);
  if (task.status == TaskStatus::Pending) {
    spdlog::warn("AP ignored a late accept for task {} from leader {}", msg.task_id.value,
                 msg.leader.value);
    out.ap = std::move(ap);
    return out;
  }
  out.first_accept = task.accept_times_s.empty();
  task.accept_times_s.emplace_back(msg.leader, now);
  out.recorded = true;
  out.ap = std::move(ap);
  return out;
}

ConfirmationOutcome apConfirmationCheck(ApState ap, double /*now*/) {
  ConfirmationOutcome out;
  std::vector<TaskId> back;
  for (TaskId id : ap.dispatched_this_round) {
    Task& task = ap.task(id);
    if (task.accept_times_s.empty()) {
      task.revertToPending();
      back.push_back(id);
    } else {
      out.accepted.push_back(id);
    }
  }
  for (auto it = back.rbegin(); it != back.rend(); ++it) ap.pending_tasks.push_front(*it);
  ap.dispatched_this_round.clear();
  out.reverted = std::move(back);
  out.ap = std::move(ap);
  return out;
}

}  // namespace clustask
