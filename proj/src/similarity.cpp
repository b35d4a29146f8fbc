// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include "clustask/similarity.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace clustask {

std::string_view toString(SimilarityLevel level) noexcept {
  switch (level) {
    case SimilarityLevel::Dissimilar:
      return "dissimilar";
    case SimilarityLevel::Neutral:
      return "neutral";
    case SimilarityLevel::Similar:
      return "similar";
  }
  return "unknown";
}

void SimilarityScale::validate() const {
  if (!(0.0 <= neutral_lo && neutral_lo <= similar_lo && similar_lo <= 1.0)) {
    throw std::invalid_argument("similarity scale needs 0 <= neutral_lo <= similar_lo <= 1");
  }
  if (!(neutral_lo <= join_threshold && join_threshold <= 1.0)) {
    throw std::invalid_argument("join_threshold must lie in [neutral_lo, 1]");
  }
}

double similarity(CapabilitySet a, CapabilitySet b) {
  if (a.empty() || b.empty()) {
    throw std::domain_error("similarity is undefined for an empty capability set");
  }
  const auto shared = static_cast<double>(capabilitySetIntersectCard(a, b));
  return shared / std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

SimilarityLevel classify(double score, const SimilarityScale& scale) noexcept {
  if (score < scale.neutral_lo) return SimilarityLevel::Dissimilar;
  if (score < scale.similar_lo) return SimilarityLevel::Neutral;
  return SimilarityLevel::Similar;
}

std::set<NodeId> buildClusterView(const NodeState& node, const SimilarityScale& scale) {
  std::set<NodeId> view;
  if (node.capabilities.empty()) {
    spdlog::warn("node {} has no capabilities; cluster view is empty", node.id.value);
    return view;
  }
  for (const auto& [id, info] : node.neighbor_table) {
    if (info.capabilities.empty()) {
      spdlog::warn("node {}: neighbor {} advertised no capabilities, skipped", node.id.value,
                   id.value);
      continue;
    }
    if (similarity(node.capabilities, info.capabilities) >= scale.join_threshold) {
      view.insert(id);
    }
  }
  return view;
}

NodeId selectLeader(std::span<const LeaderCandidate> candidates) {
  if (candidates.empty()) throw std::invalid_argument("no leader candidates");
  auto rank = [](const LeaderCandidate& c) {
    // Larger is better; the negated id makes the smallest id win final ties.
    return std::make_tuple(c.neighborhood_size, c.capabilities.size(),
                           -static_cast<std::int64_t>(c.id.value));
  };
  const LeaderCandidate* best = &candidates.front();
  for (const auto& c : candidates.subspan(1)) {
    if (rank(c) > rank(*best)) best = &c;
  }
  return best->id;
}

NodeId selectLeader(const NodeState& node) {
  std::vector<LeaderCandidate> candidates;
  candidates.reserve(node.cluster_view.size() + 1);
  candidates.push_back({node.id, node.neighborhoodSize(), node.capabilities});
  for (NodeId member : node.cluster_view) {
    const auto it = node.neighbor_table.find(member);
    if (it == node.neighbor_table.end()) {
      throw std::logic_error("cluster member missing from neighbor table");
    }
    candidates.push_back({member, it->second.neighborhood_size, it->second.capabilities});
  }
  return selectLeader(candidates);
}

}  // namespace clustask
