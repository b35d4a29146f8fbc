// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include "clustask/message.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace clustask {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

class FrameWriter {
 public:
  explicit FrameWriter(std::size_t bytes) : buf_(bytes, std::byte{0}) {}

  void u8(std::uint8_t v) { put(v, 1); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }

  std::vector<std::byte> take() && { return std::move(buf_); }

 private:
  void put(std::uint64_t v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      buf_.at(pos_++) = static_cast<std::byte>((v >> (8 * i)) & 0xffu);
    }
  }

  std::vector<std::byte> buf_;
  std::size_t pos_ = 0;
};

class FrameReader {
 public:
  explicit FrameReader(std::span<const std::byte> buf) : buf_(buf) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  double f64() { return std::bit_cast<double>(get(8)); }

 private:
  std::uint64_t get(std::size_t n) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(std::to_integer<std::uint8_t>(buf_[pos_++])) << (8 * i);
    }
    return v;
  }

  std::span<const std::byte> buf_;
  std::size_t pos_ = 0;
};

void writeTask(FrameWriter& w, const TaskSpec& t) {
  w.u32(t.id.value);
  w.u16(t.required.mask());
  w.f64(t.duration_s);
  w.u32(t.quorum);
}

TaskSpec readTask(FrameReader& r) {
  TaskSpec t;
  t.id = TaskId{r.u32()};
  t.required = CapabilitySet::fromMask(r.u16());
  t.duration_s = r.f64();
  t.quorum = r.u32();
  return t;
}

}  // namespace

MessageKind kindOf(const Message& msg) noexcept {
  return static_cast<MessageKind>(msg.index());
}

std::string_view toString(MessageKind kind) noexcept {
  switch (kind) {
    case MessageKind::CapabilityDissemination:
      return "capability_dissemination";
    case MessageKind::LeaderRegister:
      return "leader_register";
    case MessageKind::TaskDispatch:
      return "task_dispatch";
    case MessageKind::TaskAccept:
      return "task_accept";
    case MessageKind::LeaderToCluster:
      return "leader_to_cluster";
  }
  return "unknown";
}

std::uint32_t MessageSizes::bitsFor(MessageKind kind) const noexcept {
  switch (kind) {
    case MessageKind::CapabilityDissemination:
      return capability_dissemination;
    case MessageKind::LeaderRegister:
      return leader_register;
    case MessageKind::TaskDispatch:
      return task_dispatch;
    case MessageKind::TaskAccept:
      return task_accept;
    case MessageKind::LeaderToCluster:
      return leader_to_cluster;
  }
  return 0;
}

void MessageSizes::validate() const {
  for (std::size_t k = 0; k < kMessageKindCount; ++k) {
    auto kind = static_cast<MessageKind>(k);
    if (bitsFor(kind) == 0) {
      throw std::invalid_argument("message size for " + std::string(toString(kind)) +
                                  " must be positive");
    }
  }
}

std::uint32_t wireBits(MessageKind kind) noexcept {
  return MessageSizes{}.bitsFor(kind);
}

std::vector<std::byte> encode(const Message& msg) {
  const MessageKind kind = kindOf(msg);
  FrameWriter w(wireBits(kind) / 8);
  w.u8(static_cast<std::uint8_t>(kind));
  std::visit(Overloaded{
                 [&](const CapabilityDissemination& m) {
                   w.u32(m.sender.value);
                   w.u16(m.caps.mask());
                   w.u32(m.neighborhood_size);
                 },
                 [&](const LeaderRegister& m) { w.u32(m.leader.value); },
                 [&](const TaskDispatch& m) { writeTask(w, m.task); },
                 [&](const TaskAccept& m) {
                   w.u32(m.task_id.value);
                   w.u32(m.leader.value);
                 },
                 [&](const LeaderToCluster& m) {
                   writeTask(w, m.task);
                   w.u32(m.leader.value);
                 },
             },
             msg);
  return std::move(w).take();
}

Message decode(std::span<const std::byte> frame) {
  if (frame.empty()) throw std::invalid_argument("empty frame");
  const auto tag = std::to_integer<std::uint8_t>(frame[0]);
  if (tag >= kMessageKindCount) {
    throw std::invalid_argument("unknown message tag " + std::to_string(tag));
  }
  const auto kind = static_cast<MessageKind>(tag);
  if (frame.size() * 8 != wireBits(kind)) {
    throw std::invalid_argument("frame length " + std::to_string(frame.size()) +
                                " does not match " + std::string(toString(kind)));
  }
  FrameReader r(frame);
  r.u8();
  switch (kind) {
    case MessageKind::CapabilityDissemination: {
      CapabilityDissemination m;
      m.sender = NodeId{r.u32()};
      m.caps = CapabilitySet::fromMask(r.u16());
      m.neighborhood_size = r.u32();
      return m;
    }
    case MessageKind::LeaderRegister:
      return LeaderRegister{NodeId{r.u32()}};
    case MessageKind::TaskDispatch:
      return TaskDispatch{readTask(r)};
    case MessageKind::TaskAccept: {
      TaskAccept m;
      m.task_id = TaskId{r.u32()};
      m.leader = NodeId{r.u32()};
      return m;
    }
    case MessageKind::LeaderToCluster: {
      LeaderToCluster m;
      m.task = readTask(r);
      m.leader = NodeId{r.u32()};
      return m;
    }
  }
  throw std::invalid_argument("unreachable message tag");
}

}  // namespace clustask
