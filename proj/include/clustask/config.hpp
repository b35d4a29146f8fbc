// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "clustask/scenario.hpp"

namespace clustask {

enum class Mode : std::uint8_t {
  /// sm tasks per round, as configured.
  MultiTask,
  /// Same scenario, one task per round.
  BaselineSingleTask,
};

std::string_view toString(Mode m) noexcept;
Mode modeFromString(std::string_view name);

enum class SweepAxis : std::uint8_t { NodeCount, Sm, Threshold, Range };

std::string_view toString(SweepAxis a) noexcept;
SweepAxis sweepAxisFromString(std::string_view name);

/// Returns `base` with the axis parameter set to `value`.
ScenarioConfig applyAxis(ScenarioConfig base, SweepAxis axis, double value);

struct ExperimentSpec {
  ScenarioConfig scenario;
  std::uint32_t runs = 35;
  std::vector<Mode> modes{Mode::MultiTask};
  std::filesystem::path output_dir = "results";
  bool trace = false;
  /// Worker threads; 0 picks the hardware concurrency.
  std::uint32_t threads = 0;
  std::map<SweepAxis, std::vector<double>> sweep;

  void validate() const;
};

/// Bad config document. `line` is 1-based, 0 when no position is known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

ExperimentSpec loadExperiment(const std::filesystem::path& path);
ExperimentSpec parseExperiment(std::string_view text, const std::string& source = "<config>");

}  // namespace clustask
