// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include "clustask/event_log.hpp"

#include <nlohmann/json.hpp>

namespace clustask {
namespace {

nlohmann::json endpoint(NodeId id) {
  if (id == kAccessPoint) return "ap";
  return id.value;
}

bool carriesPayload(const LogRecord& r) {
  return r.message.has_value() || r.event == LogEvent::ClusterFormed ||
         r.event == LogEvent::LeaderRegistered || r.event == LogEvent::TaskDispatched ||
         r.event == LogEvent::RoundClosed;
}

}  // namespace

std::string_view toString(LogEvent e) noexcept {
  switch (e) {
    case LogEvent::Send:
      return "send";
    case LogEvent::Receive:
      return "receive";
    case LogEvent::ClusterFormed:
      return "cluster_formed";
    case LogEvent::LeaderElected:
      return "leader_elected";
    case LogEvent::LeaderRegistered:
      return "leader_registered";
    case LogEvent::TaskDispatched:
      return "task_dispatched";
    case LogEvent::TaskAccepted:
      return "task_accepted";
    case LogEvent::TaskReverted:
      return "task_reverted";
    case LogEvent::TaskCompleted:
      return "task_completed";
    case LogEvent::TaskAssigned:
      return "task_assigned";
    case LogEvent::RoundClosed:
      return "round_closed";
  }
  return "unknown";
}

std::string toJsonLine(const LogRecord& r) {
  nlohmann::ordered_json j;
  j["t"] = r.time_s;
  j["node"] = endpoint(r.node);
  j["event"] = toString(r.event);
  if (r.message) {
    j["msg"] = toString(*r.message);
    j["bits"] = r.size_bits;
  }
  if (r.peer) j["peer"] = endpoint(*r.peer);
  if (r.event == LogEvent::Send) j["dist_m"] = r.distance_m;
  if (r.task) j["task"] = r.task->value;
  if (!r.caps.empty()) j["caps"] = toStrings(r.caps);
  if (carriesPayload(r)) j["count"] = r.count;
  if (r.event == LogEvent::RoundClosed) j["aux"] = r.aux;
  if (r.value) j["value"] = *r.value;
  return j.dump();
}

void writeNdjson(std::ostream& out, std::span<const LogRecord> records) {
  for (const auto& r : records) out << toJsonLine(r) << '\n';
}

}  // namespace clustask
