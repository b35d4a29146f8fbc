// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "clustask/capability.hpp"

namespace clustask {

struct NodeId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

/// Reserved id for the access point.
inline constexpr NodeId kAccessPoint{std::numeric_limits<std::uint32_t>::max()};

struct TaskId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(TaskId, TaskId) = default;
};

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(Position, Position) = default;
};

double distance(Position a, Position b) noexcept;

enum class Role : std::uint8_t { Common, Leader };

struct NeighborInfo {
  CapabilitySet capabilities;
  std::uint32_t neighborhood_size = 0;

  friend bool operator==(const NeighborInfo&, const NeighborInfo&) = default;
};

/// One object as seen by its own protocol instance.
struct NodeState {
  NodeId id;
  Position pos;
  CapabilitySet capabilities;
  Role role = Role::Common;
  std::map<NodeId, NeighborInfo> neighbor_table;
  std::set<NodeId> cluster_view;
  /// Tasks disseminated to this node by a leader of its cluster.
  std::vector<TaskId> assigned_tasks;

  std::uint32_t neighborhoodSize() const noexcept {
    return static_cast<std::uint32_t>(neighbor_table.size());
  }
};

/// The task tuple (id, required capabilities, duration, per-cluster quorum).
struct TaskSpec {
  TaskId id;
  CapabilitySet required;
  double duration_s = 0.0;
  std::uint32_t quorum = 1;

  /// Throws std::invalid_argument when required is empty, quorum is zero or
  /// duration is not positive.
  void validate() const;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

enum class TaskStatus : std::uint8_t { Pending, Dispatched, Completed };

std::string_view toString(TaskStatus s) noexcept;

struct Task {
  TaskSpec spec;
  TaskStatus status = TaskStatus::Pending;
  std::optional<double> dispatch_time_s;
  std::vector<std::pair<NodeId, double>> accept_times_s;

  /// Pending -> Dispatched. Throws std::logic_error from any other state.
  void markDispatched(double now);
  /// Dispatched -> Pending for a task nobody accepted.
  void revertToPending();
};

/// Dispatched -> Completed. Requires `now` to equal the first accept time
/// plus the task duration; throws std::logic_error otherwise.
Task taskComplete(Task task, double now);

}  // namespace clustask

template <>
struct std::hash<clustask::NodeId> {
  std::size_t operator()(clustask::NodeId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
