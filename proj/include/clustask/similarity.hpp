// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string_view>

#include "clustask/types.hpp"

namespace clustask {

/// Labels on the similarity scale: S1 dissimilar, S2 neutral, S3 similar.
enum class SimilarityLevel : std::uint8_t { Dissimilar = 1, Neutral = 2, Similar = 3 };

std::string_view toString(SimilarityLevel level) noexcept;

struct SimilarityScale {
  double neutral_lo = 0.5;
  double similar_lo = 0.9;
  /// Neighbors at or above this score join the cluster view.
  double join_threshold = 0.8;

  /// Requires 0 <= neutral_lo <= similar_lo <= 1 and
  /// neutral_lo <= join_threshold <= 1; throws std::invalid_argument.
  void validate() const;
};

/// Cosine similarity of two capability sets: |a ∩ b| / sqrt(|a| * |b|).
/// Throws std::domain_error when either set is empty.
double similarity(CapabilitySet a, CapabilitySet b);

SimilarityLevel classify(double score, const SimilarityScale& scale) noexcept;

/// Neighbors whose similarity with the node meets the join threshold.
/// Neighbors that advertised an empty capability set are skipped.
std::set<NodeId> buildClusterView(const NodeState& node, const SimilarityScale& scale);

struct LeaderCandidate {
  NodeId id;
  std::uint32_t neighborhood_size = 0;
  CapabilitySet capabilities;
};

/// Winner under the total order (neighborhood size, capability count, -id).
/// The candidate span must be nonempty.
NodeId selectLeader(std::span<const LeaderCandidate> candidates);

/// Leader among the node's cluster view plus itself, using the neighborhood
/// sizes and capabilities recorded in the neighbor table.
NodeId selectLeader(const NodeState& node);

}  // namespace clustask
