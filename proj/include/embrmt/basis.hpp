// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace embrmt {

enum class Statistics { kFermion, kBoson };

const char* to_string(Statistics s) noexcept;

/// ell single-particle levels, indexed 0..ell-1 (level 0 is the lowest).
/// `orbit_partition` optionally groups consecutive levels into orbits of the
/// given capacities; it must sum to ell.
struct SingleParticleSpace {
  std::size_t ell = 1;
  Statistics statistics = Statistics::kFermion;
  std::vector<std::size_t> orbit_partition;

  void validate() const;
  /// Throws DomainError when m particles do not fit (fermions need m <= ell).
  void validate_particles(std::size_t m) const;
};

/// Occupation numbers n_0..n_{ell-1} of one basis state.
struct OccupationVector {
  std::vector<std::uint32_t> occ;

  std::size_t levels() const { return occ.size(); }
  std::size_t particles() const;
  std::uint32_t operator[](std::size_t i) const { return occ[i]; }
  auto operator<=>(const OccupationVector&) const = default;
};

/// Number of m-particle states: binom(ell, m) for fermions and
/// binom(ell + m - 1, m) for bosons. Throws CapacityError past 64 bits.
std::uint64_t dimension(std::size_t ell, std::size_t m, Statistics statistics);

/// Exact binomial coefficient; CapacityError when it does not fit 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Default cap on the number of enumerated states.
inline constexpr std::uint64_t kDefaultMaxBasisStates = std::uint64_t{1} << 24;

/// All m-particle occupation vectors in descending lexicographic order
/// (level 0 most significant), so the first fermion state is (1,..,1,0,..,0).
/// `index_of` is the inverse map, computed by combinatorial ranking.
class ManyBodyBasis {
 public:
  ManyBodyBasis(SingleParticleSpace space, std::size_t m,
                std::uint64_t max_states = kDefaultMaxBasisStates);

  const SingleParticleSpace& space() const noexcept { return space_; }
  Statistics statistics() const noexcept { return space_.statistics; }
  std::size_t ell() const noexcept { return space_.ell; }
  std::size_t particles() const noexcept { return m_; }
  std::size_t size() const noexcept { return states_.size(); }
  const OccupationVector& state(std::size_t i) const { return states_[i]; }
  std::span<const OccupationVector> states() const noexcept { return states_; }

  /// Position of `occ` in the basis; empty if `occ` is not a valid state.
  std::optional<std::size_t> index_of(const OccupationVector& occ) const;
  /// Ranking without validation; `occ` must be a valid state of this basis.
  std::size_t rank(std::span<const std::uint32_t> occ) const;

 private:
  std::uint64_t table_binomial(std::size_t n, std::size_t k) const;

  SingleParticleSpace space_;
  std::size_t m_;
  std::vector<OccupationVector> states_;
  // binom(n, j) for n <= ell + m, j <= ell, saturating.
  std::vector<std::uint64_t> pascal_;
  std::size_t pascal_cols_ = 0;
};

/// Same as constructing ManyBodyBasis directly.
ManyBodyBasis enumerate_basis(const SingleParticleSpace& space, std::size_t m);

struct Transition {
  std::size_t bra = 0;
  double amplitude = 0.0;
};

/// Action of the k-body term alpha^dagger(k) gamma(k) on basis state `ket`.
///
/// `create` and `annihilate` list level indices: strictly increasing for
/// fermions, nondecreasing for bosons. For fermions the operator is
/// a+_{c1}...a+_{ck} a_{ak}...a_{a1}, applied right to left with sign
/// (-1)^(occupied levels below the acted level). For bosons both strings
/// carry the 1/sqrt(prod n!) factor that normalizes k-boson states.
/// Returns empty when an annihilator hits an empty level or a fermion
/// creator hits an occupied one.
std::optional<Transition> apply_kbody_term(const ManyBodyBasis& basis, std::size_t ket,
                                           std::span<const std::size_t> create,
                                           std::span<const std::size_t> annihilate);

/// Level tuple of a k-particle state: occupied levels in increasing order,
/// repeated n_i times for bosons.
std::vector<std::size_t> level_tuple(const OccupationVector& state);

/// Minimal number of particles moved between two states: sum |a_i - b_i| / 2.
std::size_t transfer_distance(const OccupationVector& a, const OccupationVector& b);

/// Spherical-configuration analog: particle counts per orbit.
struct ConfigurationBlock {
  std::vector<std::size_t> occupancies;
  std::uint64_t dim = 0;
};

struct BlockStructure {
  std::vector<ConfigurationBlock> blocks;      // decreasing dimension
  std::vector<std::vector<std::size_t>> distance;  // pairwise transfer distance
  std::uint64_t total_dim() const;
};

/// Feasible per-orbit occupancies for m fermions with sub-dimensions
/// prod binom(N_i, m_i), sorted by decreasing dimension (ties: descending
/// occupancy order). Without a partition every level is its own orbit.
/// Infeasible m gives an empty structure.
BlockStructure configuration_blocks(const SingleParticleSpace& space, std::size_t m);

/// Per-orbit particle counts of a state under the space's partition.
std::vector<std::size_t> orbit_occupancies(const SingleParticleSpace& space,
                                           const OccupationVector& state);

/// Plot code for a transfer distance under a k-body interaction: the
/// distance itself when it is at most k, otherwise 9 (forbidden).
int transfer_code(std::size_t distance, std::size_t k) noexcept;

}  // namespace embrmt
