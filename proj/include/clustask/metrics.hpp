// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "clustask/types.hpp"

namespace clustask {

/// First-order radio model: E_tx = e_elec*k + eps_amp*k*d^2, E_rx = e_elec*k.
struct RadioModel {
  double e_elec_j_per_bit = 50e-9;
  double eps_amp_j_per_bit_m2 = 100e-12;

  double txEnergy(std::uint32_t bits, double distance_m) const noexcept;
  double rxEnergy(std::uint32_t bits) const noexcept;
  void validate() const;
};

struct RoundMetrics {
  double round_time_s = 0.0;
  std::uint32_t tasks_dispatched = 0;
  std::uint32_t nc = 0;
  std::uint32_t cpt = 0;
  std::uint32_t cit = 0;
  std::optional<double> lat_s;
};

/// Per-run counters and per-node energy accumulators. Node ids index the
/// node vectors; the access point has its own accumulators.
class MetricsLedger {
 public:
  MetricsLedger() = default;
  MetricsLedger(std::size_t node_count, RadioModel radio);

  void recordTx(NodeId node, std::uint32_t bits, double distance_m);
  void recordRx(NodeId node, std::uint32_t bits);
  void addRound(RoundMetrics round) { per_round_.push_back(round); }

  void setCounts(std::uint32_t nc, std::uint32_t nta, std::uint32_t nut, std::uint32_t completed);

  std::uint32_t nc() const noexcept { return nc_; }
  std::uint32_t nta() const noexcept { return nta_; }
  std::uint32_t nut() const noexcept { return nut_; }
  std::uint32_t nat() const noexcept { return nta_ - nut_; }
  std::uint32_t completed() const noexcept { return completed_; }

  const std::vector<RoundMetrics>& perRound() const noexcept { return per_round_; }
  const std::vector<double>& txEnergy() const noexcept { return tx_j_; }
  const std::vector<double>& rxEnergy() const noexcept { return rx_j_; }
  double apTxEnergy() const noexcept { return ap_tx_j_; }
  double apRxEnergy() const noexcept { return ap_rx_j_; }
  const RadioModel& radio() const noexcept { return radio_; }

 private:
  double& txSlot(NodeId node);
  double& rxSlot(NodeId node);

  RadioModel radio_;
  std::uint32_t nc_ = 0;
  std::uint32_t nta_ = 0;
  std::uint32_t nut_ = 0;
  std::uint32_t completed_ = 0;
  std::vector<RoundMetrics> per_round_;
  std::vector<double> tx_j_;
  std::vector<double> rx_j_;
  double ap_tx_j_ = 0.0;
  double ap_rx_j_ = 0.0;
};

/// (cpt, cit): leaders that accepted at least one task this round, and the rest.
std::pair<std::uint32_t, std::uint32_t> roundMetrics(const std::set<NodeId>& accepting_leaders,
                                                     std::uint32_t nc);

/// Last accept time minus dispatch time; empty when nobody accepted.
std::optional<double> roundLatency(double dispatch_time_s, std::span<const double> accept_times_s);

struct RunSummary {
  std::uint32_t nc = 0;
  std::uint32_t nta = 0;
  std::uint32_t nut = 0;
  std::uint32_t nat = 0;
  double allocation_rate = 0.0;
  std::uint32_t completed = 0;
  double mean_cpt = 0.0;
  double mean_cit = 0.0;
  /// Mean over rounds with at least one accept.
  std::optional<double> mean_lat_s;
  double ec_j = 0.0;
  double ec_nodes_j = 0.0;
  double ec_ap_j = 0.0;
};

RunSummary runSummary(const MetricsLedger& ledger);

struct MetricStat {
  double mean = 0.0;
  std::size_t samples = 0;
  /// Student-t half-width; empty for fewer than two samples.
  std::optional<double> half_width;
};

/// Mean and two-sided t-interval half-width. Throws std::invalid_argument on
/// an empty sample or a confidence outside (0, 1).
MetricStat aggregate(std::span<const double> values, double confidence = 0.95);

}  // namespace clustask
