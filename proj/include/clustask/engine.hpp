// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <queue>
#include <utility>
#include <variant>
#include <vector>

#include "clustask/message.hpp"
#include "clustask/types.hpp"

namespace clustask {

/// Reliable radio channel with a fixed per-hop latency.
struct ChannelModel {
  double hop_delay_s = 0.002;
  double node_range_m = 45.0;
  /// The access point reaches, and is reached by, every node.
  bool ap_reaches_all = true;
  /// A sender's radio carries one message at a time: consecutive
  /// transmissions from the same sender are spaced by hop_delay_s.
  bool serialize_tx = true;

  void validate() const;
};

struct Unicast {
  NodeId to;
};
struct BroadcastNeighborhood {};
struct ToAP {};
struct ToLeaders {
  std::vector<NodeId> leaders;
};

using Destination = std::variant<Unicast, BroadcastNeighborhood, ToAP, ToLeaders>;

enum class TimerTag : std::uint8_t {
  WarmUpBroadcast,
  FinishWarmUp,
  DispatchRound,
  ConfirmationCheck,
  TaskComplete,
};

struct Timer {
  TimerTag tag = TimerTag::WarmUpBroadcast;
  std::uint32_t arg = 0;
};

struct Delivery {
  Message msg;
  NodeId from;
};

struct Event {
  double time_s = 0.0;
  std::uint64_t seq = 0;
  NodeId target;
  std::variant<Delivery, Timer> payload;
};

/// Virtual clock plus a (time, seq)-ordered queue. Events at equal times pop
/// in insertion order.
class EventQueue {
 public:
  double now() const noexcept { return now_; }
  bool empty() const noexcept { return heap_.empty(); }
  std::size_t size() const noexcept { return heap_.size(); }
  double nextTime() const { return heap_.top().time_s; }

  /// Throws std::logic_error for a timestamp before the current clock.
  std::uint64_t schedule(double time_s, NodeId target, std::variant<Delivery, Timer> payload);

  /// Removes the earliest event and advances the clock to its time.
  Event pop();

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const noexcept {
      if (a.time_s != b.time_s) return a.time_s > b.time_s;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  double now_ = 0.0;
  std::uint64_t next_seq_ = 0;
};

/// Topology and timing of one scenario's radio links.
class Channel {
 public:
  struct Recipient {
    NodeId id;
    double distance_m = 0.0;
  };

  struct Transmission {
    NodeId from;
    double depart_s = 0.0;
    double arrive_s = 0.0;
    /// Distance the transmit amplifier must cover: the radio range for a
    /// neighborhood broadcast, the link length otherwise.
    double tx_distance_m = 0.0;
    std::vector<Recipient> recipients;
  };

  Channel(ChannelModel model, std::vector<Position> nodes, Position ap);

  /// Plans the transmissions for one send. Unicast to an unknown node throws
  /// std::out_of_range; unicast to an out-of-range node yields a transmission
  /// with no recipients. ToLeaders expands to one transmission per leader.
  std::vector<Transmission> transmit(NodeId from, const Destination& to, double now);

  const std::vector<NodeId>& neighbors(NodeId node) const { return adjacency_.at(node.value); }
  bool reachable(NodeId from, NodeId to) const;
  double distanceBetween(NodeId a, NodeId b) const;
  std::size_t nodeCount() const noexcept { return positions_.size(); }
  const ChannelModel& model() const noexcept { return model_; }

 private:
  Position positionOf(NodeId id) const;
  double reserve(NodeId from, double now);
  Transmission point(NodeId from, NodeId to, double now);

  ChannelModel model_;
  std::vector<Position> positions_;
  Position ap_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<double> tx_free_;
  double ap_tx_free_ = 0.0;
};

}  // namespace clustask
