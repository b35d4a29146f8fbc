// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clustask {

/// Sensing functions an object can perform. The first six are structural
/// (building environment), the last six physiological (patient vitals).
enum class Capability : std::uint8_t {
  Temperature = 0,
  Humidity,
  Presence,
  Light,
  Position,
  EquipmentCondition,
  Heartbeat,
  BloodPressure,
  BodyTemperature,
  Oxygenation,
  Glucose,
  Ecg,
};

inline constexpr std::size_t kCapabilityCount = 12;

inline constexpr std::array<Capability, 6> kStructuralCapabilities = {
    Capability::Temperature, Capability::Humidity, Capability::Presence,
    Capability::Light,       Capability::Position, Capability::EquipmentCondition,
};

inline constexpr std::array<Capability, 6> kPhysiologicalCapabilities = {
    Capability::Heartbeat,   Capability::BloodPressure, Capability::BodyTemperature,
    Capability::Oxygenation, Capability::Glucose,       Capability::Ecg,
};

constexpr bool isStructural(Capability c) noexcept {
  return static_cast<std::uint8_t>(c) < 6;
}

/// Lowercase snake_case name, e.g. "blood_pressure".
std::string_view toString(Capability c) noexcept;
std::optional<Capability> capabilityFromString(std::string_view name) noexcept;

/// Set over the closed 12-element capability universe, stored as a bitmask.
class CapabilitySet {
 public:
  using Mask = std::uint16_t;
  static constexpr Mask kUniverse = (1u << kCapabilityCount) - 1u;

  constexpr CapabilitySet() noexcept = default;
  constexpr CapabilitySet(std::initializer_list<Capability> caps) noexcept {
    for (Capability c : caps) insert(c);
  }

  /// Bits outside the universe are dropped.
  static constexpr CapabilitySet fromMask(Mask mask) noexcept {
    CapabilitySet s;
    s.mask_ = static_cast<Mask>(mask & kUniverse);
    return s;
  }
  static constexpr CapabilitySet all() noexcept { return fromMask(kUniverse); }

  constexpr Mask mask() const noexcept { return mask_; }
  constexpr std::size_t size() const noexcept {
    return static_cast<std::size_t>(std::popcount(static_cast<unsigned>(mask_)));
  }
  constexpr bool empty() const noexcept { return mask_ == 0; }

  constexpr bool contains(Capability c) const noexcept { return (mask_ & bit(c)) != 0; }
  constexpr void insert(Capability c) noexcept { mask_ = static_cast<Mask>(mask_ | bit(c)); }
  constexpr void erase(Capability c) noexcept { mask_ = static_cast<Mask>(mask_ & ~bit(c)); }

  constexpr bool isSubsetOf(CapabilitySet other) const noexcept {
    return (mask_ & ~other.mask_) == 0;
  }

  friend constexpr CapabilitySet operator&(CapabilitySet a, CapabilitySet b) noexcept {
    return fromMask(static_cast<Mask>(a.mask_ & b.mask_));
  }
  friend constexpr CapabilitySet operator|(CapabilitySet a, CapabilitySet b) noexcept {
    return fromMask(static_cast<Mask>(a.mask_ | b.mask_));
  }
  friend constexpr bool operator==(CapabilitySet, CapabilitySet) noexcept = default;

  /// Members in enumeration order.
  std::vector<Capability> members() const;

 private:
  static constexpr Mask bit(Capability c) noexcept {
    return static_cast<Mask>(1u << static_cast<unsigned>(c));
  }

  Mask mask_ = 0;
};

/// |a ∩ b|
constexpr std::size_t capabilitySetIntersectCard(CapabilitySet a, CapabilitySet b) noexcept {
  return (a & b).size();
}

std::vector<std::string> toStrings(CapabilitySet s);

}  // namespace clustask
