// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include "clustask/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace clustask {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

void ChannelModel::validate() const {
  if (!(hop_delay_s > 0.0)) throw std::invalid_argument("hop_delay_s must be positive");
  if (!(node_range_m > 0.0)) throw std::invalid_argument("node_range_m must be positive");
}

std::uint64_t EventQueue::schedule(double time_s, NodeId target,
                                   std::variant<Delivery, Timer> payload) {
  if (time_s < now_) {
    throw std::logic_error("event scheduled in the past: " + std::to_string(time_s) + " < " +
                           std::to_string(now_));
  }
  const std::uint64_t seq = next_seq_++;
  heap_.push(Event{time_s, seq, target, std::move(payload)});
  return seq;
}

Event EventQueue::pop() {
  if (heap_.empty()) throw std::logic_error("pop from an empty event queue");
  Event ev = heap_.top();
  heap_.pop();
  now_ = ev.time_s;
  return ev;
}

Channel::Channel(ChannelModel model, std::vector<Position> nodes, Position ap)
    : model_(model), positions_(std::move(nodes)), ap_(ap), adjacency_(positions_.size()),
      tx_free_(positions_.size(), 0.0) {
  model_.validate();
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    for (std::size_t j = i + 1; j < positions_.size(); ++j) {
      if (distance(positions_[i], positions_[j]) <= model_.node_range_m) {
        adjacency_[i].push_back(NodeId{static_cast<std::uint32_t>(j)});
        adjacency_[j].push_back(NodeId{static_cast<std::uint32_t>(i)});
      }
    }
  }
  for (auto& row : adjacency_) std::sort(row.begin(), row.end());
}

Position Channel::positionOf(NodeId id) const {
  if (id == kAccessPoint) return ap_;
  if (id.value >= positions_.size()) {
    throw std::out_of_range("unknown node " + std::to_string(id.value));
  }
  return positions_[id.value];
}

double Channel::distanceBetween(NodeId a, NodeId b) const {
  return distance(positionOf(a), positionOf(b));
}

bool Channel::reachable(NodeId from, NodeId to) const {
  if (from == to) return false;
  const double d = distanceBetween(from, to);
  if (from == kAccessPoint || to == kAccessPoint) {
    return model_.ap_reaches_all || d <= model_.node_range_m;
  }
  return d <= model_.node_range_m;
}

double Channel::reserve(NodeId from, double now) {
  if (!model_.serialize_tx) return now;
  double& free_at = from == kAccessPoint ? ap_tx_free_ : tx_free_.at(from.value);
  const double start = std::max(now, free_at);
  free_at = start + model_.hop_delay_s;
  return start;
}

Channel::Transmission Channel::point(NodeId from, NodeId to, double now) {
  const double d = distanceBetween(from, to);
  Transmission tx;
  tx.from = from;
  tx.tx_distance_m = d;
  tx.depart_s = reserve(from, now);
  tx.arrive_s = tx.depart_s + model_.hop_delay_s;
  if (reachable(from, to)) tx.recipients.push_back({to, d});
  return tx;
}

std::vector<Channel::Transmission> Channel::transmit(NodeId from, const Destination& to,
                                                     double now) {
  positionOf(from);  // validates the sender
  std::vector<Transmission> out;
  std::visit(Overloaded{
                 [&](const Unicast& u) { out.push_back(point(from, u.to, now)); },
                 [&](const ToAP&) { out.push_back(point(from, kAccessPoint, now)); },
                 [&](const ToLeaders& l) {
                   for (NodeId leader : l.leaders) out.push_back(point(from, leader, now));
                 },
                 [&](const BroadcastNeighborhood&) {
                   if (from == kAccessPoint) {
                     throw std::logic_error("the access point does not broadcast");
                   }
                   Transmission tx;
                   tx.from = from;
                   tx.tx_distance_m = model_.node_range_m;
                   tx.depart_s = reserve(from, now);
                   tx.arrive_s = tx.depart_s + model_.hop_delay_s;
                   for (NodeId n : adjacency_[from.value]) {
                     tx.recipients.push_back({n, distanceBetween(from, n)});
                   }
                   out.push_back(std::move(tx));
                 },
             },
             to);
  return out;
}

}  // namespace clustask
