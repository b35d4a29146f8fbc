// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include "clustask/metrics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace clustask {

double RadioModel::txEnergy(std::uint32_t bits, double distance_m) const noexcept {
  const auto k = static_cast<double>(bits);
  return e_elec_j_per_bit * k + eps_amp_j_per_bit_m2 * k * distance_m * distance_m;
}

double RadioModel::rxEnergy(std::uint32_t bits) const noexcept {
  return e_elec_j_per_bit * static_cast<double>(bits);
}

void RadioModel::validate() const {
  if (!(e_elec_j_per_bit > 0.0) || !(eps_amp_j_per_bit_m2 > 0.0)) {
    throw std::invalid_argument("radio constants must be positive");
  }
}

MetricsLedger::MetricsLedger(std::size_t node_count, RadioModel radio)
    : radio_(radio), tx_j_(node_count, 0.0), rx_j_(node_count, 0.0) {}

double& MetricsLedger::txSlot(NodeId node) {
  return node == kAccessPoint ? ap_tx_j_ : tx_j_.at(node.value);
}

double& MetricsLedger::rxSlot(NodeId node) {
  return node == kAccessPoint ? ap_rx_j_ : rx_j_.at(node.value);
}

void MetricsLedger::recordTx(NodeId node, std::uint32_t bits, double distance_m) {
  if (distance_m < 0.0) throw std::invalid_argument("negative transmit distance");
  txSlot(node) += radio_.txEnergy(bits, distance_m);
}

void MetricsLedger::recordRx(NodeId node, std::uint32_t bits) {
  rxSlot(node) += radio_.rxEnergy(bits);
}

void MetricsLedger::setCounts(std::uint32_t nc, std::uint32_t nta, std::uint32_t nut,
                              std::uint32_t completed) {
  if (nut > nta) throw std::invalid_argument("more unallocated tasks than tasks");
  nc_ = nc;
  nta_ = nta;
  nut_ = nut;
  completed_ = completed;
}

std::pair<std::uint32_t, std::uint32_t> roundMetrics(const std::set<NodeId>& accepting_leaders,
                                                     std::uint32_t nc) {
  const auto cpt = static_cast<std::uint32_t>(accepting_leaders.size());
  if (cpt > nc) throw std::invalid_argument("more apt clusters than registered leaders");
  return {cpt, nc - cpt};
}

std::optional<double> roundLatency(double dispatch_time_s, std::span<const double> accept_times_s) {
  if (accept_times_s.empty()) return std::nullopt;
  return *std::max_element(accept_times_s.begin(), accept_times_s.end()) - dispatch_time_s;
}

RunSummary runSummary(const MetricsLedger& ledger) {
  RunSummary s;
  s.nc = ledger.nc();
  s.nta = ledger.nta();
  s.nut = ledger.nut();
  s.nat = ledger.nat();
  s.allocation_rate = s.nta == 0 ? 0.0 : static_cast<double>(s.nat) / static_cast<double>(s.nta);
  s.completed = ledger.completed();

  const auto& rounds = ledger.perRound();
  if (!rounds.empty()) {
    double cpt = 0.0;
    double cit = 0.0;
    for (const auto& r : rounds) {
      cpt += r.cpt;
      cit += r.cit;
    }
    s.mean_cpt = cpt / static_cast<double>(rounds.size());
    s.mean_cit = cit / static_cast<double>(rounds.size());
  }
  double lat = 0.0;
  std::size_t lat_rounds = 0;
  for (const auto& r : rounds) {
    if (r.lat_s) {
      lat += *r.lat_s;
      ++lat_rounds;
    }
  }
  if (lat_rounds > 0) s.mean_lat_s = lat / static_cast<double>(lat_rounds);

  for (std::size_t i = 0; i < ledger.txEnergy().size(); ++i) {
    s.ec_nodes_j += ledger.txEnergy()[i] + ledger.rxEnergy()[i];
  }
  s.ec_ap_j = ledger.apTxEnergy() + ledger.apRxEnergy();
  s.ec_j = s.ec_nodes_j + s.ec_ap_j;
  return s;
}

MetricStat aggregate(std::span<const double> values, double confidence) {
  if (values.empty()) throw std::invalid_argument("cannot aggregate an empty sample");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1)");
  }
  const auto n = static_cast<double>(values.size());
  MetricStat stat;
  stat.samples = values.size();
  stat.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return stat;

  double ss = 0.0;
  for (double v : values) ss += (v - stat.mean) * (v - stat.mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  const double t = boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
  stat.half_width = t * sd / std::sqrt(n);
  return stat;
}

}  // namespace clustask
