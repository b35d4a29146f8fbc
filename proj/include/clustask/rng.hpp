// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace clustask {

/// Minimal-standard LCG (multiplier 16807, modulus 2^31 - 1) with
/// implementation-independent integer and real draws, so a seed yields the
/// same scenario on every platform and standard library.
class Rng {
 public:
  using Engine = std::minstd_rand0;

  explicit Rng(std::uint64_t seed) : engine_(static_cast<Engine::result_type>(seed % Engine::modulus)) {}

  /// Uniform on [lo, hi] by rejection sampling. Requires lo <= hi.
  std::uint32_t uniformInt(std::uint32_t lo, std::uint32_t hi);

  /// Uniform on [0, 1).
  double uniformReal();

  /// k distinct elements drawn uniformly without replacement, in draw order
  /// (partial Fisher-Yates over a copy of the pool).
  template <class T>
  std::vector<T> sample(std::span<const T> pool, std::size_t k) {
    std::vector<T> items(pool.begin(), pool.end());
    if (k > items.size()) k = items.size();
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = uniformInt(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(items.size() - 1));
      std::swap(items[i], items[j]);
    }
    items.resize(k);
    return items;
  }

  Engine::result_type raw() { return engine_(); }

 private:
  Engine engine_;
};

}  // namespace clustask
