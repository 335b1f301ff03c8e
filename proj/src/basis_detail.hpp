// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

namespace embrmt::detail {

using Mask = std::uint64_t;

inline Mask to_mask(std::span<const std::uint32_t> occ) {
  Mask mask = 0;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (occ[i] != 0) mask |= Mask{1} << i;
  }
  return mask;
}

inline int fermion_sign(Mask mask, std::size_t level) {
  const Mask below = (Mask{1} << level) - 1;
  return (std::popcount(mask & below) & 1) ? -1 : 1;
}

// a_{ak} ... a_{a1} on `mask`, rightmost first. Returns the sign, or 0 when
// the string annihilates the state.
inline int fermion_annihilate(Mask& mask, std::span<const std::size_t> levels) {
  int sign = 1;
  for (std::size_t level : levels) {
    const Mask bit = Mask{1} << level;
    if (!(mask & bit)) return 0;
    mask &= ~bit;
    sign *= fermion_sign(mask, level);
  }
  return sign;
}

// a+_{c1} ... a+_{ck} on `mask`, rightmost (ck) first.
inline int fermion_create(Mask& mask, std::span<const std::size_t> levels) {
  int sign = 1;
  for (std::size_t i = levels.size(); i-- > 0;) {
    const std::size_t level = levels[i];
    const Mask bit = Mask{1} << level;
    if (mask & bit) return 0;
    sign *= fermion_sign(mask, level);
    mask |= bit;
  }
  return sign;
}

// 1 / sqrt(prod_i n_i!) for the multiplicities n_i of a nondecreasing tuple.
inline double boson_normalization(std::span<const std::size_t> levels) {
  double product = 1.0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    run = (i > 0 && levels[i] == levels[i - 1]) ? run + 1 : 1;
    product *= static_cast<double>(run);
  }
  return 1.0 / std::sqrt(product);
}

// Bare b_{ak} ... b_{a1} (no normalization). Returns 0 if the state vanishes.
inline double boson_annihilate(std::span<std::uint32_t> occ, std::span<const std::size_t> levels) {
  double amp = 1.0;
  for (std::size_t level : levels) {
    if (occ[level] == 0) return 0.0;
    amp *= std::sqrt(static_cast<double>(occ[level]));
    --occ[level];
  }
  return amp;
}

inline double boson_create(std::span<std::uint32_t> occ, std::span<const std::size_t> levels) {
  double amp = 1.0;
  for (std::size_t i = levels.size(); i-- > 0;) {
    const std::size_t level = levels[i];
    ++occ[level];
    amp *= std::sqrt(static_cast<double>(occ[level]));
  }
  return amp;
}

}  // namespace embrmt::detail
