// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>

#include "embrmt/random_stream.hpp"
#include "embrmt/types.hpp"

namespace embrmt {

/// Distribution of the independent matrix elements. The semicircle law does
/// not depend on it, which is what `kUniform` is for.
enum class Deviate { kGaussian, kUniform };

struct ClassicalEnsembleSpec {
  int beta = 1;        // Dyson index: 1 (GOE), 2 (GUE), 4 (GSE)
  std::size_t n = 1;   // matrix dimension; quaternion dimension for beta = 4
  double v2 = 1.0;     // off-diagonal element variance
  Deviate deviate = Deviate::kGaussian;

  /// Throws SpecError unless beta in {1,2,4}, n >= 1 and v2 > 0.
  void validate() const;
  /// Stored dimension: n, or 2n for the quaternion-real realization.
  std::size_t stored_dim() const { return beta == 4 ? 2 * n : n; }
};

/// One ensemble member. GOE members are real symmetric; GUE and GSE members
/// are complex Hermitian, GSE stored as its 2n x 2n Pauli realization.
struct MatrixSample {
  int beta = 1;
  std::variant<RealMatrix, ComplexMatrix> entries;

  std::size_t dim() const;
  bool is_real() const { return std::holds_alternative<RealMatrix>(entries); }
  const RealMatrix& real() const { return std::get<RealMatrix>(entries); }
  const ComplexMatrix& complex() const { return std::get<ComplexMatrix>(entries); }
};

/// Samples GOE/GUE/GSE members.
///
/// Diagonal elements have variance 2 v2 and off-diagonal elements (each real
/// component, for complex ensembles) variance v2, all independent, so the
/// element density is proportional to exp(-Tr H^2 / 4 v2) in every class.
/// GSE: H = H0 (x) 1 + i sum_j Hj (x) sigma_j with H0 real symmetric and
/// Hj real antisymmetric.
MatrixSample sample_classical(const ClassicalEnsembleSpec& spec, RandomStream& rng);

/// Convenience: a GOE member as a plain real matrix.
RealMatrix sample_goe(std::size_t n, double v2, RandomStream& rng);

/// Semicircle density 2 sqrt(r^2 - e^2) / (pi r^2) on [-r, r].
double semicircle_density(double e, double radius);

/// Closed-form integral of `semicircle_density` from -r to e.
double semicircle_cdf(double e, double radius);

/// Radius of the ensemble-averaged GOE semicircle, from M(E^2) = R^2 / 4
/// with M(E^2) = (n + 1) v2.
double goe_semicircle_radius(std::size_t n, double v2);

/// Catalan number C_p = binom(2p, p) / (p + 1). Throws CapacityError when
/// the value does not fit in 64 bits (p > 35).
std::uint64_t catalan(unsigned p);

/// Unnormalized log joint eigenvalue density
///   beta * sum_{i<j} log|E_i - E_j| - (beta / 4) * sum_i E_i^2.
/// Coincident eigenvalues give -infinity.
double log_jpdf(std::span<const double> eigenvalues, int beta);

}  // namespace embrmt
