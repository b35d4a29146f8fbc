// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "clustask/message.hpp"
#include "clustask/similarity.hpp"
#include "clustask/types.hpp"

namespace clustask {

/// Which capability set a leader compares against a task's requirements.
enum class LeaderCheck : std::uint8_t {
  /// The leader's own capabilities (literal accept rule).
  LeaderCapabilities,
  /// Union of the leader's and its cluster members' capabilities.
  ClusterUnion,
};

struct ProtocolConfig {
  double warmup_duration_s = 60.0;
  double warmup_broadcast_period_s = 1.0;
  double dispatch_period_s = 60.0;
  double first_dispatch_s = 60.0;
  double last_dispatch_s = 840.0;
  double confirmation_window_s = 1.0;
  double run_until_s = 900.0;
  LeaderCheck leader_check = LeaderCheck::LeaderCapabilities;

  /// Throws std::invalid_argument on non-positive durations, a first dispatch
  /// before the end of warm-up, or a confirmation window that overlaps the
  /// next round.
  void validate() const;

  /// first_dispatch_s + k * dispatch_period_s for every k that stays at or
  /// before last_dispatch_s.
  std::vector<double> dispatchTimes() const;
  /// k * warmup_broadcast_period_s for every k strictly before the end of
  /// warm-up.
  std::vector<double> warmupBroadcastTimes() const;
};

// --- Common node / cluster coordination -----------------------------------

/// The capability announcement a node sends at `now`, or nothing once the
/// warm-up window has closed.
std::optional<CapabilityDissemination> warmUpBroadcast(const NodeState& node, double now,
                                                       const ProtocolConfig& config);

/// Upserts the sender into the neighbor table. Messages from the node itself
/// are ignored.
NodeState recvCapabilities(NodeState node, const CapabilityDissemination& msg);

struct WarmUpOutcome {
  NodeState node;
  std::optional<LeaderRegister> registration;
};

/// Builds the cluster view, runs leader selection and, if the node wins its
/// own election, promotes it and produces the registration for the AP.
WarmUpOutcome finishWarmUp(NodeState node, const SimilarityScale& scale);

/// Records a task a leader disseminated to this node, if the node belongs to
/// that leader's cluster. Returns true when the task was taken.
bool recvLeaderToCluster(NodeState& node, const LeaderToCluster& msg);

// --- Leader -----------------------------------------------------------------

struct LeaderResponse {
  TaskAccept accept;
  LeaderToCluster dissemination;
};

/// Capability set the leader checks under `check`.
CapabilitySet offeredCapabilities(const NodeState& leader, LeaderCheck check);

/// Accepts when the task's required set is covered and the cluster view is at
/// least the quorum. Declines silently otherwise.
std::optional<LeaderResponse> leaderRecvTask(const NodeState& leader, const TaskSpec& task,
                                             LeaderCheck check = LeaderCheck::LeaderCapabilities);

// --- Access point -----------------------------------------------------------

struct ApState {
  std::set<NodeId> leader_list;
  /// Every task of the scenario, indexed by TaskId value.
  std::vector<Task> tasks;
  std::deque<TaskId> pending_tasks;
  std::vector<TaskId> dispatched_this_round;
  double confirmation_window_s = 1.0;
  std::uint32_t sm = 1;

  Task& task(TaskId id);
  const Task& task(TaskId id) const;

  /// Checks that every task id sits in at most one of pending, this round's
  /// dispatch and completed, and that sm >= 1. Throws std::logic_error.
  void checkInvariants() const;
};

/// Task ids must be 0..n-1 in order; all start pending in list order.
ApState makeApState(std::span<const TaskSpec> tasks, std::uint32_t sm,
                    double confirmation_window_s);

ApState apRecvLeaderRegister(ApState ap, const LeaderRegister& msg);

struct DispatchRound {
  ApState ap;
  /// One entry per (task, leader) pair, task-major, leaders ascending.
  std::vector<std::pair<NodeId, TaskDispatch>> dispatches;
};

/// Takes up to sm tasks from the head of the pending queue and addresses each
/// to every registered leader. Requires a nonempty leader list and no round
/// still awaiting confirmation; throws std::logic_error otherwise.
DispatchRound apDispatchRound(ApState ap, double now);

struct AcceptOutcome {
  ApState ap;
  /// True when this is the task's first accept.
  bool first_accept = false;
  /// False when the accept was ignored (unknown or already reverted task).
  bool recorded = false;
};

AcceptOutcome apRecvTaskAccept(ApState ap, const TaskAccept& msg, double now);

struct ConfirmationOutcome {
  ApState ap;
  std::vector<TaskId> accepted;
  std::vector<TaskId> reverted;
};

/// Closes the round: accepted tasks stay out of the pending queue, the rest
/// return to its head in their original order.
ConfirmationOutcome apConfirmationCheck(ApState ap, double now);

}  // namespace clustask
