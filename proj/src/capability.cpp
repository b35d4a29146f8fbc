// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include "clustask/capability.hpp"

namespace clustask {
namespace {

constexpr std::array<std::string_view, kCapabilityCount> kNames = {
    "temperature", "humidity",      "presence",         "light",       "position", "equipment_condition",
    "heartbeat",   "blood_pressure", "body_temperature", "oxygenation", "glucose",  "ecg",
};

}  // namespace

std::string_view toString(Capability c) noexcept {
  return kNames[static_cast<std::size_t>(c)];
}

std::optional<Capability> capabilityFromString(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Capability>(i);
  }
  return std::nullopt;
}

std::vector<Capability> CapabilitySet::members() const {
  std::vector<Capability> out;
  out.reserve(size());
  for (std::size_t i = 0; i < kCapabilityCount; ++i) {
    auto c = static_cast<Capability>(i);
    if (contains(c)) out.push_back(c);
  }
  return out;
}

std::vector<std::string> toStrings(CapabilitySet s) {
  std::vector<std::string> out;
  for (Capability c : s.members()) out.emplace_back(toString(c));
  return out;
}

}  // namespace clustask
