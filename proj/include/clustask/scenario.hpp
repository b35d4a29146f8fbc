// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "clustask/engine.hpp"
#include "clustask/message.hpp"
#include "clustask/metrics.hpp"
#include "clustask/protocol.hpp"
#include "clustask/rng.hpp"
#include "clustask/similarity.hpp"
#include "clustask/types.hpp"

namespace clustask {

enum class Placement : std::uint8_t { Grid, UniformRandom };

std::string_view toString(Placement p) noexcept;

struct Area {
  double x_m = 200.0;
  double y_m = 200.0;
};

/// Inclusive integer range.
struct CountRange {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;
};

/// Everything needed to build and run one scenario.
struct ScenarioConfig {
  std::uint32_t node_count = 50;
  Area area;
  /// Simultaneous tasks per dispatch round (2 for demand A, 4 for demand B).
  std::uint32_t sm = 2;
  std::uint32_t run_number = 1;
  Placement placement = Placement::Grid;
  /// Capabilities each object draws per class (structural, physiological).
  CountRange capabilities_per_class{4, 6};
  /// Optional extra capabilities a task draws beyond the mandatory core.
  CountRange extra_structural{0, 3};
  CountRange extra_physiological{0, 2};
  CountRange quorum{2, 5};
  std::vector<double> task_durations_s{60.0, 120.0};

  SimilarityScale scale;
  ChannelModel channel;
  ProtocolConfig protocol;
  MessageSizes message_bits;
  RadioModel radio;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
  std::size_t dispatchRounds() const { return protocol.dispatchTimes().size(); }
};

struct Scenario {
  std::vector<NodeState> nodes;
  Position ap_position;
  std::vector<TaskSpec> tasks;
  std::uint64_t seed = 0;
  std::uint64_t capability_seed = 0;

  double totalTaskDuration() const;
};

/// Capabilities every task requires.
CapabilitySet mandatoryTaskCapabilities() noexcept;

/// node_count + run_number + sm.
std::uint64_t seedFor(std::uint64_t node_count, std::uint64_t run_number, std::uint64_t sm) noexcept;

/// Row-major grid of ceil(sqrt(n)) columns and ceil(n / columns) rows, one
/// node at the center of each cell.
std::vector<Position> placeNodes(std::uint32_t n, Area area);
std::vector<Position> placeNodesUniform(std::uint32_t n, Area area, Rng& rng);

/// Per node, a structural and a physiological count drawn from `per_class`,
/// then that many distinct capabilities of each class.
std::vector<CapabilitySet> assignCapabilities(std::uint32_t n, Rng& rng,
                                              CountRange per_class = {4, 6});

/// dispatch rounds x sm tasks; each requires the mandatory core plus random
/// extras, with a duration from task_durations_s and a quorum from `quorum`.
std::vector<TaskSpec> generateTasks(const ScenarioConfig& config, Rng& rng);

/// Nodes draw from an Rng seeded with seedFor(node_count, 0, sm) so they stay
/// fixed across runs; tasks draw from seedFor(node_count, run_number, sm).
Scenario buildScenario(const ScenarioConfig& config);

}  // namespace clustask
