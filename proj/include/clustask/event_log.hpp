// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "clustask/message.hpp"
#include "clustask/types.hpp"

namespace clustask {

enum class LogEvent : std::uint8_t {
  Send,
  Receive,
  /// Node finished warm-up: caps = own capabilities, count = cluster size.
  ClusterFormed,
  /// Node won its own election.
  LeaderElected,
  /// AP added a leader: peer = leader, count = leader list size.
  LeaderRegistered,
  /// AP dispatched a task: count = leaders addressed.
  TaskDispatched,
  /// AP recorded an accept: peer = leader.
  TaskAccepted,
  TaskReverted,
  TaskCompleted,
  /// Cluster member took a disseminated task: peer = leader.
  TaskAssigned,
  /// AP closed a round: count = cpt, aux = cit, value = latency (if any).
  RoundClosed,
};

std::string_view toString(LogEvent e) noexcept;

/// One trace record. Message fields: for capability broadcasts caps and count
/// are the advertised set and neighborhood size; for task messages caps and
/// count are the required set and quorum.
struct LogRecord {
  double time_s = 0.0;
  NodeId node;
  LogEvent event = LogEvent::Send;
  std::optional<MessageKind> message;
  std::optional<NodeId> peer;
  std::uint32_t size_bits = 0;
  double distance_m = 0.0;
  std::optional<TaskId> task;
  CapabilitySet caps;
  std::uint32_t count = 0;
  std::uint32_t aux = 0;
  std::optional<double> value;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

/// Single-line JSON object for one record. The access point is written as
/// "ap"; absent optional fields are omitted.
std::string toJsonLine(const LogRecord& record);

void writeNdjson(std::ostream& out, std::span<const LogRecord> records);

}  // namespace clustask
