// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "embrmt/basis.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "basis_detail.hpp"
#include "embrmt/errors.hpp"

namespace embrmt {

const char* to_string(Statistics s) noexcept {
  return s == Statistics::kFermion ? "fermion" : "boson";
}

void SingleParticleSpace::validate() const {
  if (ell < 1) throw DomainError("need at least one single-particle level");
  if (statistics == Statistics::kFermion && ell > 64) {
    throw CapacityError("fermion bases support at most 64 levels");
  }
  if (!orbit_partition.empty()) {
    std::size_t total = 0;
    for (std::size_t c : orbit_partition) {
      if (c == 0) throw DomainError("orbit capacities must be positive");
      total += c;
    }
    if (total != ell) {
      throw DomainError("orbit capacities sum to " + std::to_string(total) + ", expected ell = " +
                        std::to_string(ell));
    }
  }
}

void SingleParticleSpace::validate_particles(std::size_t m) const {
  validate();
  if (statistics == Statistics::kFermion && m > ell) {
    throw DomainError("cannot place " + std::to_string(m) + " fermions in " +
                      std::to_string(ell) + " levels");
  }
}

std::size_t OccupationVector::particles() const {
  return std::accumulate(occ.begin(), occ.end(), std::size_t{0});
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 value = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    value = value * (n - k + i) / i;
    if (value > std::numeric_limits<std::uint64_t>::max()) {
      throw CapacityError("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                          ") overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(value);
}

std::uint64_t dimension(std::size_t ell, std::size_t m, Statistics statistics) {
  if (ell < 1) throw DomainError("need at least one single-particle level");
  if (statistics == Statistics::kFermion) {
    if (m > ell) {
      throw DomainError("cannot place " + std::to_string(m) + " fermions in " +
                        std::to_string(ell) + " levels");
    }
    return binomial(ell, m);
  }
  return binomial(ell + m - 1, m);
}

namespace {

void enumerate(std::size_t level, std::size_t remaining, Statistics statistics,
               std::vector<std::uint32_t>& work, std::vector<OccupationVector>& out) {
  const std::size_t ell = work.size();
  if (level + 1 == ell) {
    if (statistics == Statistics::kFermion && remaining > 1) return;
    work[level] = static_cast<std::uint32_t>(remaining);
    out.push_back({work});
    return;
  }
  const std::size_t vmax = statistics == Statistics::kFermion ? std::min<std::size_t>(remaining, 1)
                                                               : remaining;
  for (std::size_t v = vmax + 1; v-- > 0;) {
    if (statistics == Statistics::kFermion && remaining - v > ell - level - 1) continue;
    work[level] = static_cast<std::uint32_t>(v);
    enumerate(level + 1, remaining - v, statistics, work, out);
  }
}

}  // namespace

ManyBodyBasis::ManyBodyBasis(SingleParticleSpace space, std::size_t m, std::uint64_t max_states)
    : space_(std::move(space)), m_(m) {
  space_.validate_particles(m_);
  const std::uint64_t dim = dimension(space_.ell, m_, space_.statistics);
  if (dim > max_states) {
    throw CapacityError("basis dimension " + std::to_string(dim) + " exceeds the cap of " +
                        std::to_string(max_states) + " states");
  }
  pascal_cols_ = space_.ell + 1;
  const std::size_t rows = space_.ell + m_ + 1;
  pascal_.assign(rows * pascal_cols_, 0);
  for (std::size_t n = 0; n < rows; ++n) {
    pascal_[n * pascal_cols_] = 1;
    for (std::size_t j = 1; j < pascal_cols_ && j <= n; ++j) {
      const std::uint64_t a = pascal_[(n - 1) * pascal_cols_ + j - 1];
      const std::uint64_t b = j <= n - 1 ? pascal_[(n - 1) * pascal_cols_ + j] : 0;
      pascal_[n * pascal_cols_ + j] =
          a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max()
                                                             : a + b;
    }
  }
  states_.reserve(static_cast<std::size_t>(dim));
  std::vector<std::uint32_t> work(space_.ell, 0);
  enumerate(0, m_, space_.statistics, work, states_);
}

std::uint64_t ManyBodyBasis::table_binomial(std::size_t n, std::size_t k) const {
  if (k > n) return 0;
  if (k >= pascal_cols_) k = n - k;  // symmetric lookup; k < pascal_cols_ by construction
  return pascal_[n * pascal_cols_ + k];
}

std::size_t ManyBodyBasis::rank(std::span<const std::uint32_t> occ) const {
  // Counts the states that are lexicographically larger: at each level, the
  // completions with a larger occupancy there and the same prefix.
  const std::size_t ell = space_.ell;
  std::size_t remaining = m_;
  std::uint64_t r = 0;
  for (std::size_t i = 0; i + 1 < ell && remaining > 0; ++i) {
    const std::size_t rest = ell - i - 1;
    const std::size_t v = occ[i];
    if (space_.statistics == Statistics::kFermion) {
      if (v == 0) r += table_binomial(rest, remaining - 1);
    } else if (v < remaining) {
      // sum_{n=0}^{N} binom(rest - 1 + n, n) = binom(rest + N, N), N = remaining - v - 1
      const std::size_t big_n = remaining - v - 1;
      r += table_binomial(rest + big_n, rest);
    }
    remaining -= v;
  }
  return static_cast<std::size_t>(r);
}

std::optional<std::size_t> ManyBodyBasis::index_of(const OccupationVector& occ) const {
  if (occ.levels() != space_.ell || occ.particles() != m_) return std::nullopt;
  if (space_.statistics == Statistics::kFermion &&
      std::any_of(occ.occ.begin(), occ.occ.end(), [](std::uint32_t v) { return v > 1; })) {
    return std::nullopt;
  }
  return rank(occ.occ);
}

ManyBodyBasis enumerate_basis(const SingleParticleSpace& space, std::size_t m) {
  return ManyBodyBasis(space, m);
}

namespace {

void check_tuple(std::span<const std::size_t> levels, std::size_t ell, Statistics statistics,
                 const char* what) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] >= ell) {
      throw DomainError(std::string(what) + " level " + std::to_string(levels[i]) +
                        " out of range");
    }
    if (i > 0) {
      const bool ordered = statistics == Statistics::kFermion ? levels[i] > levels[i - 1]
                                                              : levels[i] >= levels[i - 1];
      if (!ordered) {
        throw DomainError(std::string(what) + " tuple must be " +
                          (statistics == Statistics::kFermion ? "strictly increasing"
                                                              : "nondecreasing"));
      }
    }
  }
}

}  // namespace

std::optional<Transition> apply_kbody_term(const ManyBodyBasis& basis, std::size_t ket,
                                           std::span<const std::size_t> create,
                                           std::span<const std::size_t> annihilate) {
  if (create.size() != annihilate.size()) {
    throw DomainError("creation and annihilation strings must have the same rank");
  }
  if (ket >= basis.size()) throw DomainError("ket index out of range");
  check_tuple(create, basis.ell(), basis.statistics(), "creation");
  check_tuple(annihilate, basis.ell(), basis.statistics(), "annihilation");

  std::vector<std::uint32_t> work = basis.state(ket).occ;
  double amplitude = 0.0;
  if (basis.statistics() == Statistics::kFermion) {
    detail::Mask mask = detail::to_mask(work);
    const int s1 = detail::fermion_annihilate(mask, annihilate);
    if (s1 == 0) return std::nullopt;
    const int s2 = detail::fermion_create(mask, create);
    if (s2 == 0) return std::nullopt;
    for (std::size_t i = 0; i < work.size(); ++i) work[i] = (mask >> i) & 1U;
    amplitude = s1 * s2;
  } else {
    const double a1 = detail::boson_annihilate(work, annihilate);
    if (a1 == 0.0) return std::nullopt;
    const double a2 = detail::boson_create(work, create);
    amplitude = a1 * a2 * detail::boson_normalization(create) *
                detail::boson_normalization(annihilate);
  }
  return Transition{basis.rank(work), amplitude};
}

std::vector<std::size_t> level_tuple(const OccupationVector& state) {
  std::vector<std::size_t> levels;
  for (std::size_t i = 0; i < state.levels(); ++i) {
    for (std::uint32_t c = 0; c < state[i]; ++c) levels.push_back(i);
  }
  return levels;
}

std::size_t transfer_distance(const OccupationVector& a, const OccupationVector& b) {
  if (a.levels() != b.levels()) throw DomainError("occupation vectors of different length");
  if (a.particles() != b.particles()) throw DomainError("occupation vectors with different m");
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.levels(); ++i) {
    total += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  }
  return total / 2;
}

std::uint64_t BlockStructure::total_dim() const {
  std::uint64_t total = 0;
  for (const auto& b : blocks) total += b.dim;
  return total;
}

namespace {

std::vector<std::size_t> capacities(const SingleParticleSpace& space) {
  if (!space.orbit_partition.empty()) return space.orbit_partition;
  return std::vector<std::size_t>(space.ell, 1);
}

void enumerate_configurations(std::span<const std::size_t> caps, std::size_t orbit,
                              std::size_t remaining, std::vector<std::size_t>& work,
                              std::vector<ConfigurationBlock>& out) {
  if (orbit == caps.size()) {
    if (remaining != 0) return;
    std::uint64_t dim = 1;
    for (std::size_t i = 0; i < caps.size(); ++i) dim *= binomial(caps[i], work[i]);
    out.push_back({work, dim});
    return;
  }
  const std::size_t vmax = std::min(caps[orbit], remaining);
  for (std::size_t v = vmax + 1; v-- > 0;) {
    work[orbit] = v;
    enumerate_configurations(caps, orbit + 1, remaining - v, work, out);
  }
}

}  // namespace

BlockStructure configuration_blocks(const SingleParticleSpace& space, std::size_t m) {
  space.validate();
  if (space.statistics != Statistics::kFermion) {
    throw DomainError("configuration blocks are defined for fermions only");
  }
  const auto caps = capacities(space);
  BlockStructure result;
  if (m > space.ell) return result;
  std::vector<std::size_t> work(caps.size(), 0);
  enumerate_configurations(caps, 0, m, work, result.blocks);
  // Enumeration is already in descending occupancy order, so a stable sort
  // keeps that as the tie-break.
  std::stable_sort(result.blocks.begin(), result.blocks.end(),
                   [](const ConfigurationBlock& a, const ConfigurationBlock& b) {
                     return a.dim > b.dim;
                   });
  const std::size_t g = result.blocks.size();
  result.distance.assign(g, std::vector<std::size_t>(g, 0));
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      std::size_t total = 0;
      const auto& a = result.blocks[i].occupancies;
      const auto& b = result.blocks[j].occupancies;
      for (std::size_t o = 0; o < a.size(); ++o) total += a[o] > b[o] ? a[o] - b[o] : b[o] - a[o];
      result.distance[i][j] = total / 2;
    }
  }
  return result;
}

std::vector<std::size_t> orbit_occupancies(const SingleParticleSpace& space,
                                           const OccupationVector& state) {
  const auto caps = capacities(space);
  std::vector<std::size_t> counts(caps.size(), 0);
  std::size_t level = 0;
  for (std::size_t o = 0; o < caps.size(); ++o) {
    for (std::size_t c = 0; c < caps[o]; ++c, ++level) counts[o] += state[level];
  }
  return counts;
}

int transfer_code(std::size_t distance, std::size_t k) noexcept {
  return distance <= k ? static_cast<int>(distance) : 9;
}

}  // namespace embrmt
