// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include "clustask/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace clustask {
namespace {

int lineOf(const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  return m.is_null() ? 0 : m.line + 1;
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& what) const {
    throw ConfigError(source_, lineOf(at), what);
  }

  void requireMap(const YAML::Node& n, const std::string& name) const {
    if (!n.IsMap()) fail(n, "'" + name + "' must be a mapping");
  }

  void allowKeys(const YAML::Node& map, const std::string& section,
                 std::initializer_list<std::string_view> keys) const {
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        fail(kv.first, "unknown key '" + key + "' in " + section);
      }
    }
  }

  template <class T>
  T scalar(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail(n, "'" + key + "' must be a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::BadConversion&) {
      fail(n, "'" + key + "' has the wrong type: '" + n.Scalar() + "'");
    }
  }

  template <class T>
  void get(const YAML::Node& map, const char* key, T& out) const {
    if (const YAML::Node n = map[key]) out = scalar<T>(n, key);
  }

  void get(const YAML::Node& map, const char* key, std::uint32_t& out) const {
    if (const YAML::Node n = map[key]) {
      const auto v = scalar<long long>(n, key);
      if (v < 0 || v > 0xFFFFFFFFLL) fail(n, std::string("'") + key + "' is out of range");
      out = static_cast<std::uint32_t>(v);
    }
  }

  void get(const YAML::Node& map, const char* key, CountRange& out) const {
    const YAML::Node n = map[key];
    if (!n) return;
    if (!n.IsSequence() || n.size() != 2) fail(n, std::string("'") + key + "' must be [lo, hi]");
    out = {checkedCount(n[0], key), checkedCount(n[1], key)};
  }

  std::vector<double> numbers(const YAML::Node& n, const std::string& key) const {
    if (!n.IsSequence()) fail(n, "'" + key + "' must be a list");
    std::vector<double> out;
    for (const auto& item : n) out.push_back(scalar<double>(item, key));
    return out;
  }

  const std::string& source() const noexcept { return source_; }

 private:
  std::uint32_t checkedCount(const YAML::Node& n, const char* key) const {
    const auto v = scalar<long long>(n, key);
    if (v < 0 || v > 0xFFFFFFFFLL) fail(n, std::string("'") + key + "' is out of range");
    return static_cast<std::uint32_t>(v);
  }

  std::string source_;
};

// Runs a validate() call and reports its message at `at`.
template <class F>
void checked(const Reader& r, const YAML::Node& at, F&& validate) {
  try {
    validate();
  } catch (const std::invalid_argument& e) {
    r.fail(at, e.what());
  }
}

void readScenario(const Reader& r, const YAML::Node& n, ScenarioConfig& c) {
  r.requireMap(n, "scenario");
  r.allowKeys(n, "scenario",
              {"node_count", "demand", "sm", "area_m", "placement", "capabilities_per_class",
               "extra_structural", "extra_physiological", "quorum", "task_durations_s"});
  r.get(n, "node_count", c.node_count);
  if (n["demand"] && n["sm"]) r.fail(n["sm"], "give either 'demand' or 'sm', not both");
  if (const YAML::Node d = n["demand"]) {
    const auto v = r.scalar<std::string>(d, "demand");
    if (v == "A") {
      c.sm = 2;
    } else if (v == "B") {
      c.sm = 4;
    } else {
      r.fail(d, "'demand' must be A or B, got '" + v + "'");
    }
  }
  r.get(n, "sm", c.sm);
  if (const YAML::Node a = n["area_m"]) {
    const auto v = r.numbers(a, "area_m");
    if (v.size() != 2) r.fail(a, "'area_m' must be [x, y]");
    c.area = {v[0], v[1]};
  }
  if (const YAML::Node p = n["placement"]) {
    const auto v = r.scalar<std::string>(p, "placement");
    if (v == "grid") {
      c.placement = Placement::Grid;
    } else if (v == "uniform_random") {
      c.placement = Placement::UniformRandom;
    } else {
      r.fail(p, "'placement' must be grid or uniform_random, got '" + v + "'");
    }
  }
  r.get(n, "capabilities_per_class", c.capabilities_per_class);
  r.get(n, "extra_structural", c.extra_structural);
  r.get(n, "extra_physiological", c.extra_physiological);
  r.get(n, "quorum", c.quorum);
  if (const YAML::Node d = n["task_durations_s"]) c.task_durations_s = r.numbers(d, "task_durations_s");
}

void readSimilarity(const Reader& r, const YAML::Node& n, SimilarityScale& s) {
  r.requireMap(n, "similarity");
  r.allowKeys(n, "similarity", {"neutral_lo", "similar_lo", "join_threshold"});
  r.get(n, "neutral_lo", s.neutral_lo);
  r.get(n, "similar_lo", s.similar_lo);
  r.get(n, "join_threshold", s.join_threshold);
  checked(r, n, [&] { s.validate(); });
}

void readChannel(const Reader& r, const YAML::Node& n, ChannelModel& ch) {
  r.requireMap(n, "channel");
  r.allowKeys(n, "channel", {"hop_delay_s", "node_range_m", "ap_reaches_all", "serialize_tx"});
  r.get(n, "hop_delay_s", ch.hop_delay_s);
  r.get(n, "node_range_m", ch.node_range_m);
  r.get(n, "ap_reaches_all", ch.ap_reaches_all);
  r.get(n, "serialize_tx", ch.serialize_tx);
  checked(r, n, [&] { ch.validate(); });
}

void readProtocol(const Reader& r, const YAML::Node& n, ProtocolConfig& p) {
  r.requireMap(n, "protocol");
  r.allowKeys(n, "protocol",
              {"warmup_duration_s", "warmup_broadcast_period_s", "dispatch_period_s",
               "first_dispatch_s", "last_dispatch_s", "confirmation_window_s", "run_until_s",
               "leader_check"});
  r.get(n, "warmup_duration_s", p.warmup_duration_s);
  r.get(n, "warmup_broadcast_period_s", p.warmup_broadcast_period_s);
  r.get(n, "dispatch_period_s", p.dispatch_period_s);
  r.get(n, "first_dispatch_s", p.first_dispatch_s);
  r.get(n, "last_dispatch_s", p.last_dispatch_s);
  r.get(n, "confirmation_window_s", p.confirmation_window_s);
  r.get(n, "run_until_s", p.run_until_s);
  if (const YAML::Node lc = n["leader_check"]) {
    const auto v = r.scalar<std::string>(lc, "leader_check");
    if (v == "leader_capabilities") {
      p.leader_check = LeaderCheck::LeaderCapabilities;
    } else if (v == "cluster_union") {
      p.leader_check = LeaderCheck::ClusterUnion;
    } else {
      r.fail(lc, "'leader_check' must be leader_capabilities or cluster_union, got '" + v + "'");
    }
  }
  checked(r, n, [&] { p.validate(); });
}

void readMessageBits(const Reader& r, const YAML::Node& n, MessageSizes& m) {
  r.requireMap(n, "message_bits");
  r.allowKeys(n, "message_bits",
              {"capability_dissemination", "leader_register", "task_dispatch", "task_accept",
               "leader_to_cluster"});
  r.get(n, "capability_dissemination", m.capability_dissemination);
  r.get(n, "leader_register", m.leader_register);
  r.get(n, "task_dispatch", m.task_dispatch);
  r.get(n, "task_accept", m.task_accept);
  r.get(n, "leader_to_cluster", m.leader_to_cluster);
  checked(r, n, [&] { m.validate(); });
}

void readRadio(const Reader& r, const YAML::Node& n, RadioModel& radio) {
  r.requireMap(n, "radio");
  r.allowKeys(n, "radio", {"e_elec_j_per_bit", "eps_amp_j_per_bit_m2"});
  r.get(n, "e_elec_j_per_bit", radio.e_elec_j_per_bit);
  r.get(n, "eps_amp_j_per_bit_m2", radio.eps_amp_j_per_bit_m2);
  checked(r, n, [&] { radio.validate(); });
}

void readExperiment(const Reader& r, const YAML::Node& n, ExperimentSpec& spec) {
  r.requireMap(n, "experiment");
  r.allowKeys(n, "experiment", {"runs", "modes", "output_dir", "trace", "threads"});
  r.get(n, "runs", spec.runs);
  if (spec.runs < 1) r.fail(n["runs"], "'runs' must be at least 1");
  if (const YAML::Node m = n["modes"]) {
    if (!m.IsSequence() || m.size() == 0) r.fail(m, "'modes' must be a nonempty list");
    spec.modes.clear();
    for (const auto& item : m) {
      const auto name = r.scalar<std::string>(item, "modes");
      try {
        const Mode mode = modeFromString(name);
        if (std::find(spec.modes.begin(), spec.modes.end(), mode) != spec.modes.end()) {
          r.fail(item, "mode '" + name + "' listed twice");
        }
        spec.modes.push_back(mode);
      } catch (const std::invalid_argument& e) {
        r.fail(item, e.what());
      }
    }
  }
  if (const YAML::Node o = n["output_dir"]) spec.output_dir = r.scalar<std::string>(o, "output_dir");
  r.get(n, "trace", spec.trace);
  r.get(n, "threads", spec.threads);
}

void readSweep(const Reader& r, const YAML::Node& n, ExperimentSpec& spec) {
  r.requireMap(n, "sweep");
  r.allowKeys(n, "sweep", {"node_count", "sm", "threshold", "range"});
  for (const auto& kv : n) {
    const auto name = kv.first.as<std::string>();
    const SweepAxis axis = sweepAxisFromString(name);
    auto values = r.numbers(kv.second, name);
    if (values.empty()) r.fail(kv.second, "sweep axis '" + name + "' has no values");
    for (double v : values) {
      checked(r, kv.second, [&] { applyAxis(spec.scenario, axis, v).validate(); });
    }
    spec.sweep[axis] = std::move(values);
  }
}

bool isWholeCount(double v) {
  return v >= 1.0 && v <= 4294967295.0 && std::floor(v) == v;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& what)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         what),
      line_(line) {}

std::string_view toString(Mode m) noexcept {
  return m == Mode::MultiTask ? "multi_task" : "baseline_single_task";
}

Mode modeFromString(std::string_view name) {
  if (name == "multi_task") return Mode::MultiTask;
  if (name == "baseline_single_task") return Mode::BaselineSingleTask;
  throw std::invalid_argument("unknown mode '" + std::string(name) +
                              "' (expected multi_task or baseline_single_task)");
}

std::string_view toString(SweepAxis a) noexcept {
  switch (a) {
    case SweepAxis::NodeCount:
      return "node_count";
    case SweepAxis::Sm:
      return "sm";
    case SweepAxis::Threshold:
      return "threshold";
    case SweepAxis::Range:
      return "range";
  }
  return "unknown";
}

SweepAxis sweepAxisFromString(std::string_view name) {
  for (SweepAxis a : {SweepAxis::NodeCount, SweepAxis::Sm, SweepAxis::Threshold, SweepAxis::Range}) {
    if (toString(a) == name) return a;
  }
  throw std::invalid_argument("unknown sweep axis '" + std::string(name) +
                              "' (expected node_count, sm, threshold or range)");
}

ScenarioConfig applyAxis(ScenarioConfig base, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::NodeCount:
      if (!isWholeCount(value)) throw std::invalid_argument("node_count values must be whole and >= 1");
      base.node_count = static_cast<std::uint32_t>(value);
      break;
    case SweepAxis::Sm:
      if (!isWholeCount(value)) throw std::invalid_argument("sm values must be whole and >= 1");
      base.sm = static_cast<std::uint32_t>(value);
      break;
    case SweepAxis::Threshold:
      base.scale.join_threshold = value;
      break;
    case SweepAxis::Range:
      base.channel.node_range_m = value;
      break;
  }
  return base;
}

void ExperimentSpec::validate() const {
  if (runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (modes.empty()) throw std::invalid_argument("modes must not be empty");
  scenario.validate();
  for (const auto& [axis, values] : sweep) {
    if (values.empty()) throw std::invalid_argument("sweep axis has no values");
    for (double v : values) applyAxis(scenario, axis, v).validate();
  }
}

ExperimentSpec parseExperiment(std::string_view text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, e.mark.is_null() ? 0 : e.mark.line + 1, e.msg);
  }
  ExperimentSpec spec;
  if (root.IsNull()) return spec;
  const Reader r(source);
  r.requireMap(root, "the document root");
  r.allowKeys(root, "the document root",
              {"experiment", "scenario", "similarity", "channel", "protocol", "message_bits",
               "radio", "sweep"});
  if (const YAML::Node n = root["experiment"]) readExperiment(r, n, spec);
  if (const YAML::Node n = root["scenario"]) readScenario(r, n, spec.scenario);
  if (const YAML::Node n = root["similarity"]) readSimilarity(r, n, spec.scenario.scale);
  if (const YAML::Node n = root["channel"]) readChannel(r, n, spec.scenario.channel);
  if (const YAML::Node n = root["protocol"]) readProtocol(r, n, spec.scenario.protocol);
  if (const YAML::Node n = root["message_bits"]) readMessageBits(r, n, spec.scenario.message_bits);
  if (const YAML::Node n = root["radio"]) readRadio(r, n, spec.scenario.radio);
  checked(r, root["scenario"] ? root["scenario"] : root, [&] { spec.scenario.validate(); });
  if (const YAML::Node n = root["sweep"]) readSweep(r, n, spec);
  return spec;
}

ExperimentSpec loadExperiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseExperiment(buf.str(), path.string());
}

}  // namespace clustask
