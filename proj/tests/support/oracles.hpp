// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations for the tests. Nothing here calls the
// library code it is meant to check.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "clustask/event_log.hpp"
#include "clustask/scenario.hpp"

namespace oracle {

/// Capability sets as 0/1 vectors over the 12-element universe.
using Vec12 = std::array<int, 12>;

Vec12 toVec(clustask::CapabilitySet s);

/// Cosine of two 0/1 vectors by explicit dot product and norms.
double cosine(const Vec12& a, const Vec12& b);

struct StaticNode {
  double x = 0.0;
  double y = 0.0;
  Vec12 caps{};
};

/// For every node, the in-range neighbors with cosine >= threshold.
std::vector<std::set<std::uint32_t>> clusterViews(const std::vector<StaticNode>& nodes,
                                                  double range_m, double threshold);

/// Nodes that win the (in-range degree, |caps|, -id) comparison within their
/// own cluster view plus themselves.
std::set<std::uint32_t> leaders(const std::vector<StaticNode>& nodes, double range_m,
                                double threshold);

/// x_{k+1} = 16807 x_k mod (2^31 - 1), first `count` outputs.
std::vector<std::uint32_t> minstdSequence(std::uint32_t seed, std::size_t count);

/// Energy recomputed from Send/Receive trace records with the first-order
/// model; returns {nodes, access point}.
std::pair<double, double> energyFromLog(std::span<const clustask::LogRecord> log, double e_elec,
                                        double eps_amp);

/// TaskAccept sends whose leader lacked a required capability or a large
/// enough cluster, judged from ClusterFormed and TaskDispatch receive records.
struct SoundnessViolation {
  std::uint32_t leader;
  std::uint32_t task;
  std::string reason;
};
std::vector<SoundnessViolation> auditAccepts(std::span<const clustask::LogRecord> log);

/// Frozen two-sided 95% Student-t half-widths computed offline with
/// scipy.stats.t.interval, one per dataset.
struct TIntervalCase {
  std::vector<double> values;
  double mean;
  double half_width;
};
const std::vector<TIntervalCase>& tIntervalCases();

}  // namespace oracle
