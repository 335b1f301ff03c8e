// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "embrmt/basis.hpp"
#include "embrmt/random_stream.hpp"
#include "embrmt/types.hpp"

namespace embrmt {

/// Random k-body matrix elements v_k^{alpha,gamma}: a GOE over the k-particle
/// basis (diagonal variance 2 v2, off-diagonal v2).
struct KBodyCoefficients {
  std::size_t ell = 0;
  std::size_t k = 0;
  Statistics statistics = Statistics::kFermion;
  double v2 = 1.0;
  RealMatrix coeffs;
};

KBodyCoefficients sample_kbody(std::size_t ell, std::size_t k, Statistics statistics, double v2,
                               RandomStream& rng);

/// Diagonal one-body coefficients sum_i e_i n_i.
KBodyCoefficients one_body_coefficients(Statistics statistics, std::span<const double> energies);

/// Dense m-particle matrix of a k-body operator.
struct ManyBodyHamiltonian {
  std::shared_ptr<const ManyBodyBasis> basis;
  RealMatrix entries;

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
};

/// Cap on the dense embedded dimension (d x d doubles are stored).
inline constexpr std::size_t kDefaultMaxDenseDim = 8192;

/// H(m)_{ab} = sum_{alpha,gamma} v^{alpha,gamma} <a| alpha+(k) gamma(k) |b>.
/// Entries between states more than k transfers apart are exactly zero and
/// the result is exactly symmetric.
ManyBodyHamiltonian embed(const KBodyCoefficients& coeffs, std::size_t m,
                          std::size_t max_dim = kDefaultMaxDenseDim);
ManyBodyHamiltonian embed(const KBodyCoefficients& coeffs,
                          std::shared_ptr<const ManyBodyBasis> basis,
                          std::size_t max_dim = kDefaultMaxDenseDim);

/// h1 + lambda2 * v2body over the same basis.
ManyBodyHamiltonian compose_one_plus_two(const ManyBodyHamiltonian& h1,
                                         const ManyBodyHamiltonian& v2body, double lambda2);

/// How single-particle energies of the one-body part are chosen.
enum class SpEnergies {
  kUnitSpacing,     // e_i = i + 1
  kGoeEigenvalues,  // eigenvalues of an ell x ell GOE member, ascending
};

struct OneBodyPart {
  SpEnergies mode = SpEnergies::kUnitSpacing;
  std::vector<double> energies;  // explicit values override `mode`
  double lambda2 = 1.0;
};

struct EmbeddedEnsembleSpec {
  std::size_t ell = 10;
  std::size_t m = 5;
  std::size_t k = 2;
  Statistics statistics = Statistics::kFermion;
  double v2 = 1.0;
  std::size_t member_count = 100;
  std::uint64_t seed = 0;
  std::optional<OneBodyPart> one_body;

  void validate() const;
  std::uint64_t dim() const { return dimension(ell, m, statistics); }
};

/// One member: the embedded k-body part, plus h1 when a one-body part is
/// configured (H = h1 + lambda2 V). The k-body elements are drawn first from
/// `rng`, then any random single-particle energies.
ManyBodyHamiltonian sample_embedded(const EmbeddedEnsembleSpec& spec, RandomStream& rng,
                                    std::shared_ptr<const ManyBodyBasis> basis = nullptr);

/// Normalized centroid <H> = Tr H / d and variance <H^2> - <H>^2.
struct TraceMoments {
  double centroid = 0.0;
  double variance = 0.0;
};

TraceMoments trace_moments(const RealMatrix& h);

/// Cross-particle-number fluctuation measures over an ensemble:
///   Sigma11(m,m') = cov(<H>^m, <H>^m') / sqrt(avg var_m * avg var_m')
///   Sigma22(m,m') = cov(var_m, var_m') / (avg var_m * avg var_m')
/// with z-scores of each covariance estimate.
struct CrossMoments {
  std::vector<std::size_t> m_list;
  RealMatrix sigma11;
  RealMatrix sigma22;
  RealMatrix z11;
  RealMatrix z22;
};

/// `samples[member][i]` holds the moments for the i-th particle number.
CrossMoments reduce_cross_moments(std::span<const std::vector<TraceMoments>> samples,
                                  std::vector<std::size_t> m_list);

/// Reuses each member's k-body sample for every m in `m_list`.
CrossMoments cross_moment_fluctuations(const EmbeddedEnsembleSpec& spec,
                                       std::span<const std::size_t> m_list,
                                       std::size_t workers = 1);

/// Control: independent GOE members of the matching dimensions, one fresh
/// matrix per particle number.
CrossMoments cross_moment_goe_control(const EmbeddedEnsembleSpec& spec,
                                      std::span<const std::size_t> m_list,
                                      std::size_t workers = 1);

}  // namespace embrmt
