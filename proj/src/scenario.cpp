// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include "clustask/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>

namespace clustask {
namespace {

constexpr std::array<Capability, 3> kMandatoryStructural = {
    Capability::Temperature, Capability::Humidity, Capability::Presence};
constexpr std::array<Capability, 4> kMandatoryPhysiological = {
    Capability::Heartbeat, Capability::BloodPressure, Capability::BodyTemperature,
    Capability::Oxygenation};

std::vector<Capability> remaining(std::span<const Capability> cls, CapabilitySet taken) {
  std::vector<Capability> out;
  for (Capability c : cls) {
    if (!taken.contains(c)) out.push_back(c);
  }
  return out;
}

void checkRange(CountRange r, std::uint32_t max, const char* name) {
  if (r.lo > r.hi || r.hi > max) {
    throw std::invalid_argument(std::string(name) + " must satisfy lo <= hi <= " +
                                std::to_string(max));
  }
}

}  // namespace

std::string_view toString(Placement p) noexcept {
  return p == Placement::Grid ? "grid" : "uniform_random";
}

void ScenarioConfig::validate() const {
  if (node_count < 1) throw std::invalid_argument("node_count must be at least 1");
  if (sm < 1) throw std::invalid_argument("sm must be at least 1");
  if (!(area.x_m > 0.0) || !(area.y_m > 0.0)) throw std::invalid_argument("area must be positive");
  checkRange(capabilities_per_class, 6, "capabilities_per_class");
  if (capabilities_per_class.hi == 0) {
    throw std::invalid_argument("capabilities_per_class must allow at least one capability");
  }
  checkRange(extra_structural, 3, "extra_structural");
  checkRange(extra_physiological, 2, "extra_physiological");
  checkRange(quorum, std::numeric_limits<std::uint32_t>::max(), "quorum");
  if (quorum.lo < 1) throw std::invalid_argument("quorum must be at least 1");
  if (task_durations_s.empty()) throw std::invalid_argument("task_durations_s is empty");
  for (double d : task_durations_s) {
    if (!(d > 0.0)) throw std::invalid_argument("task durations must be positive");
  }
  scale.validate();
  channel.validate();
  protocol.validate();
  message_bits.validate();
  radio.validate();
}

double Scenario::totalTaskDuration() const {
  return std::accumulate(tasks.begin(), tasks.end(), 0.0,
                         [](double acc, const TaskSpec& t) { return acc + t.duration_s; });
}

CapabilitySet mandatoryTaskCapabilities() noexcept {
  CapabilitySet s;
  for (Capability c : kMandatoryStructural) s.insert(c);
  for (Capability c : kMandatoryPhysiological) s.insert(c);
  return s;
}

std::uint64_t seedFor(std::uint64_t node_count, std::uint64_t run_number, std::uint64_t sm) noexcept {
  return node_count + run_number + sm;
}

std::vector<Position> placeNodes(std::uint32_t n, Area area) {
  if (n < 1) throw std::invalid_argument("placeNodes needs at least one node");
  const auto cols = static_cast<std::uint32_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  const std::uint32_t rows = (n + cols - 1) / cols;
  const double dx = area.x_m / cols;
  const double dy = area.y_m / rows;
  std::vector<Position> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    out.push_back({(static_cast<double>(i % cols) + 0.5) * dx,
                   (static_cast<double>(i / cols) + 0.5) * dy});
  }
  return out;
}

std::vector<Position> placeNodesUniform(std::uint32_t n, Area area, Rng& rng) {
  std::vector<Position> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const double x = rng.uniformReal() * area.x_m;
    const double y = rng.uniformReal() * area.y_m;
    out.push_back({x, y});
  }
  return out;
}

std::vector<CapabilitySet> assignCapabilities(std::uint32_t n, Rng& rng, CountRange per_class) {
  std::vector<CapabilitySet> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t structural = rng.uniformInt(per_class.lo, per_class.hi);
    const std::uint32_t physiological = rng.uniformInt(per_class.lo, per_class.hi);
    CapabilitySet caps;
    for (Capability c : rng.sample<Capability>(kStructuralCapabilities, structural)) caps.insert(c);
    for (Capability c : rng.sample<Capability>(kPhysiologicalCapabilities, physiological)) {
      caps.insert(c);
    }
    out.push_back(caps);
  }
  return out;
}

std::vector<TaskSpec> generateTasks(const ScenarioConfig& config, Rng& rng) {
  const CapabilitySet core = mandatoryTaskCapabilities();
  const auto optional_structural = remaining(kStructuralCapabilities, core);
  const auto optional_physiological = remaining(kPhysiologicalCapabilities, core);

  const std::size_t count = config.dispatchRounds() * config.sm;
  std::vector<TaskSpec> tasks;
  tasks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    TaskSpec t;
    t.id = TaskId{static_cast<std::uint32_t>(i)};
    t.required = core;
    const std::uint32_t extra_s =
        rng.uniformInt(config.extra_structural.lo, config.extra_structural.hi);
    const std::uint32_t extra_h =
        rng.uniformInt(config.extra_physiological.lo, config.extra_physiological.hi);
    for (Capability c : rng.sample<Capability>(optional_structural, extra_s)) t.required.insert(c);
    for (Capability c : rng.sample<Capability>(optional_physiological, extra_h)) {
      t.required.insert(c);
    }
    const auto last = static_cast<std::uint32_t>(config.task_durations_s.size() - 1);
    t.duration_s = config.task_durations_s[rng.uniformInt(0, last)];
    t.quorum = rng.uniformInt(config.quorum.lo, config.quorum.hi);
    tasks.push_back(t);
  }
  return tasks;
}

Scenario buildScenario(const ScenarioConfig& config) {
  config.validate();
  Scenario s;
  s.seed = seedFor(config.node_count, config.run_number, config.sm);
  s.capability_seed = seedFor(config.node_count, 0, config.sm);
  s.ap_position = {config.area.x_m / 2.0, config.area.y_m / 2.0};

  Rng node_rng(s.capability_seed);
  const auto caps = assignCapabilities(config.node_count, node_rng, config.capabilities_per_class);
  const auto positions = config.placement == Placement::Grid
                             ? placeNodes(config.node_count, config.area)
                             : placeNodesUniform(config.node_count, config.area, node_rng);
  s.nodes.reserve(config.node_count);
  for (std::uint32_t i = 0; i < config.node_count; ++i) {
    NodeState node;
    node.id = NodeId{i};
    node.pos = positions[i];
    node.capabilities = caps[i];
    s.nodes.push_back(std::move(node));
  }

  Rng task_rng(s.seed);
  s.tasks = generateTasks(config, task_rng);
  return s;
}

}  // namespace clustask
