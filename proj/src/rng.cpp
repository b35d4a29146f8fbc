// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include "clustask/rng.hpp"

#include <stdexcept>

namespace clustask {
namespace {

// The engine yields values in [1, modulus - 1].
constexpr std::uint64_t kOutputSpan = Rng::Engine::modulus - 1;

}  // namespace

std::uint32_t Rng::uniformInt(std::uint32_t lo, std::uint32_t hi) {
  if (lo > hi) throw std::invalid_argument("uniformInt: lo > hi");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - lo + 1;
  if (span > kOutputSpan) throw std::invalid_argument("uniformInt: range exceeds generator span");
  const std::uint64_t limit = kOutputSpan - kOutputSpan % span;
  for (;;) {
    const std::uint64_t v = static_cast<std::uint64_t>(engine_()) - 1;
    if (v < limit) return lo + static_cast<std::uint32_t>(v % span);
  }
}

double Rng::uniformReal() {
  return static_cast<double>(engine_() - 1) / static_cast<double>(kOutputSpan);
}

}  // namespace clustask
