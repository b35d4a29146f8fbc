// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "clustask/types.hpp"

namespace clustask {

struct CapabilityDissemination {
  NodeId sender;
  CapabilitySet caps;
  std::uint32_t neighborhood_size = 0;

  friend bool operator==(const CapabilityDissemination&, const CapabilityDissemination&) = default;
};

struct LeaderRegister {
  NodeId leader;

  friend bool operator==(const LeaderRegister&, const LeaderRegister&) = default;
};

struct TaskDispatch {
  TaskSpec task;

  friend bool operator==(const TaskDispatch&, const TaskDispatch&) = default;
};

struct TaskAccept {
  TaskId task_id;
  NodeId leader;

  friend bool operator==(const TaskAccept&, const TaskAccept&) = default;
};

struct LeaderToCluster {
  TaskSpec task;
  NodeId leader;

  friend bool operator==(const LeaderToCluster&, const LeaderToCluster&) = default;
};

using Message =
    std::variant<CapabilityDissemination, LeaderRegister, TaskDispatch, TaskAccept, LeaderToCluster>;

enum class MessageKind : std::uint8_t {
  CapabilityDissemination = 0,
  LeaderRegister,
  TaskDispatch,
  TaskAccept,
  LeaderToCluster,
};

inline constexpr std::size_t kMessageKindCount = 5;

MessageKind kindOf(const Message& msg) noexcept;
std::string_view toString(MessageKind kind) noexcept;

/// Size in bits charged to the radio for each message kind.
struct MessageSizes {
  std::uint32_t capability_dissemination = 256;
  std::uint32_t leader_register = 64;
  std::uint32_t task_dispatch = 256;
  std::uint32_t task_accept = 96;
  std::uint32_t leader_to_cluster = 256;

  std::uint32_t bitsFor(MessageKind kind) const noexcept;
  /// Throws std::invalid_argument if any size is zero.
  void validate() const;
};

/// Wire frame length in bits for a kind. Frames are fixed-length and match
/// the default MessageSizes.
std::uint32_t wireBits(MessageKind kind) noexcept;

/// Little-endian fixed-length frame: one tag byte, the fields, zero padding.
std::vector<std::byte> encode(const Message& msg);

/// Throws std::invalid_argument on an unknown tag or a length that does not
/// match the tag's frame.
Message decode(std::span<const std::byte> frame);

}  // namespace clustask
