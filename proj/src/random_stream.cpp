// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "embrmt/random_stream.hpp"

#include <cmath>

namespace embrmt {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffULL); };
  const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  const std::uint64_t h = mix64(seed ^ mix64(stream_id));
  std::seed_seq seq{lo(seed), hi(seed), lo(stream_id), hi(stream_id), lo(h), hi(h)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double RandomStream::normal() { return normal_(engine_); }

double RandomStream::uniform() { return uniform_(engine_); }

double RandomStream::gaussian(double variance) { return std::sqrt(variance) * normal(); }

double RandomStream::centered_uniform(double variance) {
  const double half_width = std::sqrt(3.0 * variance);
  return half_width * (2.0 * uniform() - 1.0);
}

RandomStream RandomStream::split(std::uint64_t child) const {
  return RandomStream(mix64(seed_ ^ mix64(stream_id_ + 0x632be59bd9b4e019ULL)), child);
}

}  // namespace embrmt
