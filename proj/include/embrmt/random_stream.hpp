// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace embrmt {

/// Seeded source of deviates for one ensemble member.
///
/// The sequence is a pure function of (seed, stream_id): the same pair always
/// produces the same deviates, regardless of which thread draws them or how
/// many workers a run uses. Distinct stream ids are decorrelated by hashing
/// the pair into the engine seed sequence.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Standard normal deviate.
  double normal();
  /// Uniform deviate on [0, 1).
  double uniform();
  /// Zero-mean Gaussian deviate with the given variance.
  double gaussian(double variance);
  /// Zero-mean uniform deviate with the given variance, on [-a, a), a = sqrt(3 var).
  double centered_uniform(double variance);

  /// Independent child stream. Children of the same parent with different
  /// `child` labels do not overlap; the parent stream is left untouched.
  RandomStream split(std::uint64_t child) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// SplitMix64 finalizer, used to derive child seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace embrmt
